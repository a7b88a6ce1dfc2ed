//! Dalla Man's model: the gastric emptying rate dips and recovers, which
//! gives a second peak in R_A.

use mealsim::engine::{simulate_meals, IntegratorOptions, MealEvent, MealSchedule};
use mealsim::models::{dalla_man_kempt, DallaMan, DallaManParams};
use mealsim::scenario::{count_local_maxima, PEAK_DEADBAND};

fn main() -> mealsim::Result<()> {
    let p = DallaManParams::default();
    let d = 90_000.0;
    println!("k_empt over the stomach content (D = 90 g):");
    for q in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!(
            "  Q_sto = {:>5.2}·D  k_empt = {:.5} 1/min",
            q,
            dalla_man_kempt(q * d, d, &p)?
        );
    }

    let model = DallaMan::new(p)?;
    let traj = simulate_meals(
        &model,
        &[0.0; 3],
        &MealSchedule::single(MealEvent::impulse(0.0, d)),
        480.0,
        &IntegratorOptions::default(),
    )?;
    let maxima = count_local_maxima(&traj.outputs, PEAK_DEADBAND);
    println!("local maxima of R_A: {maxima}");
    for t in (0..=480).step_by(30) {
        let r = traj.outputs[t];
        println!("{t:>4} min {r:>9.2} {}", "#".repeat((r / 10.0) as usize));
    }
    Ok(())
}
