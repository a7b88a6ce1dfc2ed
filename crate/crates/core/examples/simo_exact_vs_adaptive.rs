//! The SIMO model is linear, so each constant-input interval can be solved
//! exactly with the matrix exponential. Compare with the adaptive integrator.

use mealsim::engine::{simulate_meals, IntegratorOptions, MealEvent, MealSchedule};
use mealsim::linearity::relative_sup_deviation;
use mealsim::models::{simo, SimoParams};

fn main() -> mealsim::Result<()> {
    let model = simo(&SimoParams::default())?;
    let meals = MealSchedule::new(vec![
        MealEvent::impulse(0.0, 50_000.0),
        MealEvent::step(240.0, 70_000.0, 15.0),
        MealEvent::impulse(600.0, 30_000.0),
    ])?;
    let x0 = [0.0; 4];
    let exact = model.simulate_exact(&x0, &meals, 900.0, 1.0)?;
    let adaptive = simulate_meals(&model, &x0, &meals, 900.0, &IntegratorOptions::default())?;
    println!("realization: {}", model.realization().provenance);
    println!("A =\n{}", model.realization().a);
    println!(
        "relative sup difference: {:.2e}",
        relative_sup_deviation(&exact.outputs, &adaptive.outputs)
    );
    println!(
        "absorbed {:.1} g of 150 g",
        exact.output_integral() / 1000.0
    );
    Ok(())
}
