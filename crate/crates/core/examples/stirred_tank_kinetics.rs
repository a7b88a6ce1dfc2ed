//! A → B → C in a stirred tank, integrated with the same solver as the meal
//! models.

use mealsim::engine::{integrate, InputSignal, IntegratorOptions, MealMemory, MealModel};
use mealsim::kinetics::{cstr_rhs, production_rates, CstrSpec, StoichiometricSystem};
use nalgebra::DMatrix;

struct Tank {
    spec: CstrSpec,
    s: DMatrix<f64>,
}

impl Tank {
    fn rates(c: &[f64]) -> Vec<f64> {
        vec![0.5 * c[0], 0.1 * c[1]]
    }
}

impl MealModel for Tank {
    fn name(&self) -> &str {
        "tank"
    }
    fn state_labels(&self) -> Vec<String> {
        vec!["A".into(), "B".into(), "C".into()]
    }
    fn rhs(&self, _t: f64, c: &[f64], _d: f64, _m: &MealMemory, dc: &mut [f64]) {
        let sys = StoichiometricSystem::new(self.s.clone(), Tank::rates);
        let r = production_rates(&sys, c).unwrap();
        dc.copy_from_slice(&cstr_rhs(&self.spec, c, &r).unwrap());
    }
    fn output(&self, c: &[f64]) -> f64 {
        c[1]
    }
    fn linear_in_meal_size(&self) -> bool {
        true
    }
    fn body_weight(&self) -> f64 {
        1.0
    }
}

fn main() -> mealsim::Result<()> {
    let tank = Tank {
        spec: CstrSpec::new(2.0, 0.2, vec![1.0, 0.0, 0.0])?,
        s: DMatrix::from_row_slice(2, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0]),
    };
    let traj = integrate(
        &tank,
        &[0.0; 3],
        &InputSignal::zero(),
        (0.0, 60.0),
        &IntegratorOptions::default().with_output_interval(10.0),
    )?;
    for (t, c) in traj.times.iter().zip(&traj.states) {
        println!(
            "t={t:>4}  A={:.4}  B={:.4}  C={:.4}  total={:.4}",
            c[0],
            c[1],
            c[2],
            c.iter().sum::<f64>()
        );
    }
    Ok(())
}
