//! A 90 g meal eaten at once, over 5 min and over 30 min.

use mealsim::catalog::{ModelId, ModelSpec};
use mealsim::engine::{simulate_meals, steady_state, IntegratorOptions, MealEvent, MealSchedule};

fn main() -> mealsim::Result<()> {
    let opts = IntegratorOptions::default().with_output_interval(0.5);
    println!(
        "{:<16} {:>16} {:>16} {:>16}",
        "model", "impulse", "5 min", "30 min"
    );
    for id in ModelId::ALL {
        let model = ModelSpec::new(id).build()?;
        let x0 = steady_state(model.as_ref())?;
        let cells: Vec<String> = [0.0, 5.0, 30.0]
            .iter()
            .map(|&w| {
                let e = if w > 0.0 {
                    MealEvent::step(0.0, 90_000.0, w)
                } else {
                    MealEvent::impulse(0.0, 90_000.0)
                };
                let traj =
                    simulate_meals(model.as_ref(), &x0, &MealSchedule::single(e), 600.0, &opts)
                        .unwrap();
                let (peak, t) = traj.peak().unwrap();
                format!("{peak:>8.1} @{t:>6.1}")
            })
            .collect();
        println!("{:<16} {}", id.as_str(), cells.join(" "));
    }
    Ok(())
}
