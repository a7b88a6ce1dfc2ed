//! SIMO model: stomach, jejunum, delay compartment and ileum
//! (De Gaetano et al., 2013).

use nalgebra::DMatrix;

use super::params::{fraction, parameter_set, positive};
use crate::engine::{LinearModel, LinearRealization};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimoParams {
    pub k_js: f64,
    pub k_rj: f64,
    pub k_lr: f64,
    pub k_gj: f64,
    pub k_gl: f64,
    pub f: f64,
    pub bw: f64,
}

impl Default for SimoParams {
    fn default() -> Self {
        Self {
            k_js: 0.026,
            k_rj: 0.033,
            k_lr: 0.030,
            k_gj: 0.036,
            k_gl: 0.027,
            f: 1.0,
            bw: 82.0,
        }
    }
}

impl SimoParams {
    fn check(&self) -> Result<()> {
        for (k, v) in [
            ("k_js", self.k_js),
            ("k_rj", self.k_rj),
            ("k_lr", self.k_lr),
            ("k_gj", self.k_gj),
            ("k_gl", self.k_gl),
            ("bw", self.bw),
        ] {
            positive(k, v)?;
        }
        fraction("f", self.f)
    }
}

parameter_set!(SimoParams, "simo", {
    "k_js" => k_js,
    "k_rj" => k_rj,
    "k_lr" => k_lr,
    "k_gj" => k_gj,
    "k_gl" => k_gl,
    "f" => f,
    "bw" => bw,
});

pub fn simo_realization(p: &SimoParams) -> Result<LinearRealization> {
    p.check()?;
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(4, 4, &[
        -p.k_js, 0.0,                  0.0,     0.0,
         p.k_js, -(p.k_gj + p.k_rj),   0.0,     0.0,
         0.0,     p.k_rj,             -p.k_lr,  0.0,
         0.0,     0.0,                 p.k_lr, -p.k_gl,
    ]);
    let b = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]);
    let c = DMatrix::from_row_slice(1, 4, &[0.0, p.f * p.k_gj, 0.0, p.f * p.k_gl]);
    Ok(LinearRealization::new(a, b, c, DMatrix::zeros(1, 1))?
        .with_labels(vec!["S".into(), "J".into(), "R".into(), "L".into()])
        .with_provenance("SIMO: S -k_js-> J -k_rj-> R -k_lr-> L; absorption k_gj (J), k_gl (L)"))
}

pub fn simo(p: &SimoParams) -> Result<LinearModel> {
    LinearModel::new("simo", simo_realization(p)?, p.bw)
}
