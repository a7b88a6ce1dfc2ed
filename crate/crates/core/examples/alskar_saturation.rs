//! Alskär's model saturates: doubling the meal barely raises the peak and
//! mostly prolongs absorption.

use mealsim::engine::{simulate_meals, IntegratorOptions, MealEvent, MealSchedule};
use mealsim::models::{Alskar, AlskarParams};

fn main() -> mealsim::Result<()> {
    let model = Alskar::new(AlskarParams::default())?;
    let opts = IntegratorOptions::default().with_output_interval(0.5);
    println!(
        "{:>6} {:>10} {:>8} {:>14}",
        "D [g]", "peak", "t_peak", "R_A > 300 [min]"
    );
    for grams in [22.5, 45.0, 90.0, 180.0] {
        let traj = simulate_meals(
            &model,
            &[0.0; 4],
            &MealSchedule::single(MealEvent::impulse(0.0, grams * 1000.0)),
            900.0,
            &opts,
        )?;
        let (peak, t) = traj.peak().unwrap();
        let long = traj.outputs.iter().filter(|&&r| r > 300.0).count() as f64 * 0.5;
        println!("{grams:>6.1} {peak:>10.1} {t:>8.1} {long:>14.1}");
    }
    Ok(())
}
