//! Two-compartment gut absorption model with a single time constant
//! (Hovorka et al., 2004).

use nalgebra::DMatrix;

use super::params::{fraction, parameter_set, positive};
use crate::engine::{LinearModel, LinearRealization};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HovorkaParams {
    /// Carbohydrate bioavailability.
    pub a_g: f64,
    /// Time constant, min.
    pub tau_d: f64,
    /// Fraction of absorbed glucose appearing in plasma.
    pub f: f64,
    /// Body weight, kg.
    pub bw: f64,
}

impl Default for HovorkaParams {
    fn default() -> Self {
        Self {
            a_g: 0.8,
            tau_d: 40.0,
            f: 1.0,
            bw: 82.0,
        }
    }
}

impl HovorkaParams {
    fn check(&self) -> Result<()> {
        fraction("a_g", self.a_g)?;
        positive("tau_d", self.tau_d)?;
        fraction("f", self.f)?;
        positive("bw", self.bw)
    }
}

parameter_set!(HovorkaParams, "hovorka", {
    "a_g" => a_g,
    "tau_d" => tau_d,
    "f" => f,
    "bw" => bw,
});

pub fn hovorka_realization(p: &HovorkaParams) -> Result<LinearRealization> {
    p.check()?;
    let k = 1.0 / p.tau_d;
    let a = DMatrix::from_row_slice(2, 2, &[-k, 0.0, k, -k]);
    let b = DMatrix::from_column_slice(2, 1, &[p.a_g, 0.0]);
    let c = DMatrix::from_row_slice(1, 2, &[0.0, p.f * k]);
    Ok(LinearRealization::new(a, b, c, DMatrix::zeros(1, 1))?
        .with_labels(vec!["D1".into(), "D2".into()])
        .with_provenance(
            "A_c = [[-1/tau_D, 0], [1/tau_D, -1/tau_D]], B_c = [A_G, 0]', C_c = [0, f/tau_D]",
        ))
}

pub fn hovorka(p: &HovorkaParams) -> Result<LinearModel> {
    LinearModel::new("hovorka", hovorka_realization(p)?, p.bw)
}

/// Closed-form `R_A(t)` after an impulse of `carbs` mg at `t = 0` from rest.
pub fn hovorka_impulse_response(p: &HovorkaParams, carbs: f64, t: f64) -> f64 {
    p.f * p.a_g * carbs * t * (-t / p.tau_d).exp() / (p.tau_d * p.tau_d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::MealModel;
    use crate::models::ParameterSet;

    #[test]
    fn default_matrices() {
        let r = hovorka_realization(&HovorkaParams::default()).unwrap();
        assert_eq!(
            r.a,
            DMatrix::from_row_slice(2, 2, &[-0.025, 0.0, 0.025, -0.025])
        );
        assert_eq!(r.b.as_slice(), &[0.8, 0.0]);
        assert_eq!(r.c.as_slice(), &[0.0, 0.025]);
    }

    #[test]
    fn eigenvalues_on_diagonal() {
        let r = hovorka_realization(&HovorkaParams {
            tau_d: 55.0,
            ..Default::default()
        })
        .unwrap();
        let ev = r.a.clone().schur().complex_eigenvalues();
        for e in ev.iter() {
            assert!((e.re + 1.0 / 55.0).abs() < 1e-12 && e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn impulse_injection_is_bioavailable_fraction() {
        let m = hovorka(&HovorkaParams::default()).unwrap();
        assert_eq!(m.injection(&[0.0, 0.0]).unwrap(), vec![0.8, 0.0]);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(HovorkaParams::default()
            .with_overrides([("a_g", 1.5)])
            .is_err());
        assert!(HovorkaParams::default()
            .with_overrides([("tau_d", 0.0)])
            .is_err());
        let p = HovorkaParams::default()
            .with_overrides([("F", 0.5)])
            .unwrap();
        assert_eq!(p.f, 0.5);
    }
}
