//! Hovorka's two-compartment model: simulated impulse response against the
//! closed form `f·A_G·D·t·e^{−t/τ_D}/τ_D²`.

use mealsim::engine::{simulate_impulse_meals, IntegratorOptions, MealEvent, MealSchedule};
use mealsim::models::{hovorka, hovorka_impulse_response, HovorkaParams};

fn main() -> mealsim::Result<()> {
    let p = HovorkaParams::default();
    let model = hovorka(&p)?;
    let d = 90_000.0;
    let meal = MealSchedule::single(MealEvent::impulse(0.0, d));
    let traj = simulate_impulse_meals(
        &model,
        &[0.0, 0.0],
        &meal,
        300.0,
        &IntegratorOptions::default().with_output_interval(20.0),
    )?;

    println!("{:>6} {:>12} {:>12}", "t", "simulated", "closed form");
    for (t, r) in traj.times.iter().zip(&traj.outputs) {
        println!(
            "{t:>6.0} {r:>12.4} {:>12.4}",
            hovorka_impulse_response(&p, d, *t)
        );
    }
    let (peak, t_peak) = traj.peak().unwrap();
    println!("peak {peak:.2} mg/min at {t_peak} min (τ_D = {})", p.tau_d);
    Ok(())
}
