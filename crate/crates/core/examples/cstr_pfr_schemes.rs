//! CSTR-PFR with an open pylorus, discretized by finite volumes and by a
//! spectral Galerkin method at several resolutions.

use std::time::Instant;

use mealsim::catalog::{ModelId, ModelSpec};
use mealsim::discretization::Scheme;
use mealsim::engine::{simulate_meals, steady_state, IntegratorOptions, MealEvent, MealSchedule};
use mealsim::linearity::relative_sup_deviation;

fn main() -> mealsim::Result<()> {
    let meal = MealSchedule::single(MealEvent::impulse(0.0, 90_000.0));
    let opts = IntegratorOptions::default();
    let run = |scheme, m| -> mealsim::Result<Vec<f64>> {
        let model = ModelSpec::new(ModelId::CstrPfrOpen)
            .with_scheme(scheme, Some(m))
            .build()?;
        let x0 = steady_state(model.as_ref())?;
        Ok(simulate_meals(model.as_ref(), &x0, &meal, 600.0, &opts)?.outputs)
    };
    let reference = run(Scheme::SpectralGalerkin, 48)?;
    for (scheme, m) in [
        (Scheme::FiniteVolume, 50),
        (Scheme::FiniteVolume, 100),
        (Scheme::FiniteVolume, 400),
        (Scheme::SpectralGalerkin, 8),
        (Scheme::SpectralGalerkin, 16),
        (Scheme::SpectralGalerkin, 32),
    ] {
        let start = Instant::now();
        let r = run(scheme, m)?;
        println!(
            "{} M={m:<4} deviation from SG(48) {:.2e}  ({:.0} ms)",
            scheme.name(),
            relative_sup_deviation(&reference, &r),
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    Ok(())
}
