//! The three pylorus variants of the CSTR-PFR model for three meal sizes,
//! with the global mass balance at the end of the run.

use mealsim::catalog::{ModelId, ModelSpec};
use mealsim::engine::{simulate_meals, steady_state, IntegratorOptions, MealEvent, MealSchedule};

fn main() -> mealsim::Result<()> {
    let opts = IntegratorOptions::default();
    for id in [
        ModelId::CstrPfrOpen,
        ModelId::CstrPfrMoxon,
        ModelId::CstrPfrAlskar,
    ] {
        let model = ModelSpec::new(id).build_cstr_pfr()?.with_accounting(true);
        for grams in [45.0, 90.0, 180.0] {
            let d = grams * 1000.0;
            let x0 = steady_state(&model)?;
            let traj = simulate_meals(
                &model,
                &x0,
                &MealSchedule::single(MealEvent::impulse(0.0, d)),
                720.0,
                &opts,
            )?;
            let (peak, t) = traj.peak().unwrap();
            let x = traj.final_state().unwrap();
            let (absorbed, outflow) = model.accumulated(x).unwrap();
            let left = x[0] + model.intestine_mass(model.intestine(x));
            println!(
                "{id:<16} {grams:>5} g  peak {peak:>7.1} mg/min at {t:>4} min  absorbed {:>6.1} g  passed {:>5.1} g  left {:>5.1} g",
                absorbed / 1000.0,
                outflow / 1000.0,
                left / 1000.0
            );
        }
    }
    Ok(())
}
