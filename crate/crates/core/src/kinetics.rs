//! Stoichiometry, stirred-tank balances and the plug-flow flux law.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Reactions `r(c)` with stoichiometric matrix `S` (one row per reaction).
pub struct StoichiometricSystem<F>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    pub s: DMatrix<f64>,
    pub rate_fn: F,
}

impl<F> StoichiometricSystem<F>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    pub fn new(s: DMatrix<f64>, rate_fn: F) -> Self {
        Self { s, rate_fn }
    }

    pub fn n_reactions(&self) -> usize {
        self.s.nrows()
    }

    pub fn n_components(&self) -> usize {
        self.s.ncols()
    }
}

/// Production rates `R = Sᵀ r(c)`.
pub fn production_rates<F>(sys: &StoichiometricSystem<F>, c: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if c.len() != sys.n_components() {
        return Err(Error::DimensionMismatch {
            what: "concentration vector",
            expected: sys.n_components(),
            found: c.len(),
        });
    }
    let r = (sys.rate_fn)(c);
    if r.len() != sys.n_reactions() {
        return Err(Error::DimensionMismatch {
            what: "reaction-rate vector",
            expected: sys.n_reactions(),
            found: r.len(),
        });
    }
    let out = sys.s.tr_mul(&DVector::from_vec(r));
    Ok(out.iter().copied().collect())
}

/// Continuous stirred-tank reactor: volume `v`, flow `f`, inflow concentrations `c_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct CstrSpec {
    pub v: f64,
    pub f: f64,
    pub c_in: Vec<f64>,
}

impl CstrSpec {
    pub fn new(v: f64, f: f64, c_in: Vec<f64>) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::invalid("V", "volume must be positive"));
        }
        if !(f >= 0.0) {
            return Err(Error::invalid("F", "flow must be non-negative"));
        }
        Ok(Self { v, f, c_in })
    }
}

/// `ċ = (c_in − c)·F/V + R`.
pub fn cstr_rhs(spec: &CstrSpec, c: &[f64], r: &[f64]) -> Result<Vec<f64>> {
    let n = spec.c_in.len();
    for (what, found) in [
        ("concentration vector", c.len()),
        ("production vector", r.len()),
    ] {
        if found != n {
            return Err(Error::DimensionMismatch {
                what,
                expected: n,
                found,
            });
        }
    }
    let dilution = spec.f / spec.v;
    Ok(spec
        .c_in
        .iter()
        .zip(c)
        .zip(r)
        .map(|((ci, c), r)| (ci - c) * dilution + r)
        .collect())
}

/// Axial velocity `v` and diffusion coefficient `d_c` of a plug-flow reactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfrFluxSpec {
    pub v: f64,
    pub d_c: f64,
}

impl PfrFluxSpec {
    pub fn new(v: f64, d_c: f64) -> Result<Self> {
        if !(d_c >= 0.0) {
            return Err(Error::invalid(
                "D_c",
                "diffusion coefficient must be non-negative",
            ));
        }
        if !v.is_finite() {
            return Err(Error::invalid("v", "velocity must be finite"));
        }
        Ok(Self { v, d_c })
    }
}

/// Advective plus Fickian flux `v c − D_c ∂c/∂z`.
pub fn pfr_flux(spec: &PfrFluxSpec, c: f64, dc_dz: f64) -> f64 {
    spec.v * c - spec.d_c * dc_dz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_to_b_conserves() {
        let k = 0.3;
        let sys = StoichiometricSystem::new(
            DMatrix::from_row_slice(1, 2, &[-1.0, 1.0]),
            |c: &[f64]| vec![k * c[0]],
        );
        let r = production_rates(&sys, &[2.0, 5.0]).unwrap();
        assert_eq!(r, vec![-0.6, 0.6]);
    }

    #[test]
    fn second_order_rate() {
        let sys = StoichiometricSystem::new(
            DMatrix::from_row_slice(1, 2, &[-2.0, 1.0]),
            |c: &[f64]| vec![c[0] * c[0]],
        );
        assert_eq!(
            production_rates(&sys, &[3.0, 0.0]).unwrap(),
            vec![-18.0, 9.0]
        );
    }

    #[test]
    fn zero_rates() {
        let sys = StoichiometricSystem::new(
            DMatrix::from_row_slice(2, 3, &[1.0, -1.0, 0.0, 0.0, 2.0, -1.0]),
            |_: &[f64]| vec![0.0, 0.0],
        );
        assert_eq!(
            production_rates(&sys, &[1.0, 1.0, 1.0]).unwrap(),
            vec![0.0; 3]
        );
    }

    #[test]
    fn rate_arity_checked() {
        let sys = StoichiometricSystem::new(
            DMatrix::from_row_slice(1, 2, &[-1.0, 1.0]),
            |_: &[f64]| vec![1.0, 2.0],
        );
        assert!(production_rates(&sys, &[1.0, 1.0]).is_err());
        assert!(production_rates(&sys, &[1.0]).is_err());
    }

    #[test]
    fn cstr_cases() {
        let spec = CstrSpec::new(2.0, 1.0, vec![4.0]).unwrap();
        assert_eq!(cstr_rhs(&spec, &[0.0], &[0.0]).unwrap(), vec![2.0]);
        assert_eq!(cstr_rhs(&spec, &[4.0], &[0.0]).unwrap(), vec![0.0]);
        let batch = CstrSpec::new(2.0, 0.0, vec![4.0]).unwrap();
        assert_eq!(cstr_rhs(&batch, &[1.0], &[-0.5]).unwrap(), vec![-0.5]);
        assert!(CstrSpec::new(0.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn flux_signs() {
        assert_eq!(
            pfr_flux(&PfrFluxSpec::new(0.0, 2.0).unwrap(), 1.0, -1.0),
            2.0
        );
        assert_eq!(
            pfr_flux(&PfrFluxSpec::new(3.0, 0.0).unwrap(), 2.0, 7.0),
            6.0
        );
        assert_eq!(
            pfr_flux(&PfrFluxSpec::new(3.0, 1.0).unwrap(), 0.0, 0.0),
            0.0
        );
    }
}
