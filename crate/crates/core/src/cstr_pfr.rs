//! Stomach as a stirred tank, small intestine as a plug-flow reactor.
//!
//! The stomach empties at `F_sd = k_sd·m_s` into the intestine inlet. Glucose
//! is carried along the intestine by peristaltic advection and diffusion and
//! absorbed through the wall at `Q_a = (2f/r_si)·v_a·c`. The pylorus rate
//! `k_sd` is constant, driven by `R_A` (Moxon) or by the duodenal glucose
//! mass (Alskär).

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::discretization::{Scheme, SpatialDiscretization};
use crate::engine::{LinearRealization, MealMemory, MealModel};
use crate::error::{Error, Result};
use crate::kinetics::PfrFluxSpec;
use crate::models::alskar::hill_fraction;
use crate::models::params::{nearest_key, parameter_set, positive};

/// Duodenum length relative to the whole small intestine.
pub const DUODENUM_FRACTION: f64 = 0.08;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CstrPfrParams {
    pub z0: f64,
    pub zf: f64,
    pub v_p: f64,
    pub d_p: f64,
    pub r_si: f64,
    pub f: f64,
    pub v_a: f64,
    pub bw: f64,
}

impl Default for CstrPfrParams {
    fn default() -> Self {
        Self {
            z0: 0.0,
            zf: 2.85,
            v_p: 0.0102,
            d_p: 1e-4,
            r_si: 0.018,
            f: 12.0,
            v_a: 6.4392e-6,
            bw: 82.0,
        }
    }
}

impl CstrPfrParams {
    fn check(&self) -> Result<()> {
        if !(self.zf > self.z0) {
            return Err(Error::invalid("zf", "must exceed z0"));
        }
        if !(self.d_p >= 0.0) {
            return Err(Error::invalid("d_p", "must be non-negative"));
        }
        if !(self.v_a >= 0.0) {
            return Err(Error::invalid("v_a", "must be non-negative"));
        }
        for (k, v) in [
            ("v_p", self.v_p),
            ("r_si", self.r_si),
            ("f", self.f),
            ("bw", self.bw),
        ] {
            positive(k, v)?;
        }
        Ok(())
    }

    /// Cross-section `A_si = π r_si²`.
    pub fn area(&self) -> f64 {
        PI * self.r_si * self.r_si
    }

    /// First-order absorption constant `(2f/r_si)·v_a` in 1/min.
    pub fn absorption_rate(&self) -> f64 {
        2.0 * self.f / self.r_si * self.v_a
    }

    /// End of the duodenum.
    pub fn z_d(&self) -> f64 {
        self.z0 + DUODENUM_FRACTION * (self.zf - self.z0)
    }

    pub fn flux(&self) -> PfrFluxSpec {
        PfrFluxSpec {
            v: self.v_p,
            d_c: self.d_p,
        }
    }
}

parameter_set!(CstrPfrParams, "cstr_pfr", {
    "z0" => z0,
    "zf" => zf,
    "v_p" => v_p,
    "d_p" => d_p,
    "r_si" => r_si,
    "f" => f,
    "v_a" => v_a,
    "bw" => bw,
});

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PylorusMode {
    Open {
        k_sd: f64,
    },
    Moxon {
        k_sd_max: f64,
        r_a_max: f64,
        sigma: f64,
    },
    Alskar {
        k_sd_min: f64,
        k_sd_max: f64,
        m_d50: f64,
        gamma: f64,
    },
}

impl PylorusMode {
    pub fn open() -> Self {
        PylorusMode::Open { k_sd: 0.06 }
    }

    pub fn moxon() -> Self {
        PylorusMode::Moxon {
            k_sd_max: 0.0554,
            r_a_max: 420.0,
            sigma: 0.1,
        }
    }

    pub fn alskar() -> Self {
        PylorusMode::Alskar {
            k_sd_min: 0.0116,
            k_sd_max: 0.14,
            m_d50: 7420.0,
            gamma: 14.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PylorusMode::Open { .. } => "open",
            PylorusMode::Moxon { .. } => "moxon",
            PylorusMode::Alskar { .. } => "alskar",
        }
    }

    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            PylorusMode::Open { .. } => &["k_sd"],
            PylorusMode::Moxon { .. } => &["k_sd_max", "r_a_max", "sigma"],
            PylorusMode::Alskar { .. } => &["k_sd_min", "k_sd_max", "m_d50", "gamma"],
        }
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        match *self {
            PylorusMode::Open { k_sd } => vec![("k_sd", k_sd)],
            PylorusMode::Moxon {
                k_sd_max,
                r_a_max,
                sigma,
            } => {
                vec![
                    ("k_sd_max", k_sd_max),
                    ("r_a_max", r_a_max),
                    ("sigma", sigma),
                ]
            }
            PylorusMode::Alskar {
                k_sd_min,
                k_sd_max,
                m_d50,
                gamma,
            } => vec![
                ("k_sd_min", k_sd_min),
                ("k_sd_max", k_sd_max),
                ("m_d50", m_d50),
                ("gamma", gamma),
            ],
        }
    }

    /// Set one parameter; `section` is only used in the error message.
    pub fn set(&mut self, section: &str, key: &str, value: f64) -> Result<()> {
        let key = key.to_ascii_lowercase();
        let slot = match (self, key.as_str()) {
            (PylorusMode::Open { k_sd }, "k_sd") => k_sd,
            (PylorusMode::Moxon { k_sd_max, .. }, "k_sd_max") => k_sd_max,
            (PylorusMode::Moxon { r_a_max, .. }, "r_a_max") => r_a_max,
            (PylorusMode::Moxon { sigma, .. }, "sigma") => sigma,
            (PylorusMode::Alskar { k_sd_min, .. }, "k_sd_min") => k_sd_min,
            (PylorusMode::Alskar { k_sd_max, .. }, "k_sd_max") => k_sd_max,
            (PylorusMode::Alskar { m_d50, .. }, "m_d50") => m_d50,
            (PylorusMode::Alskar { gamma, .. }, "gamma") => gamma,
            (mode, _) => {
                return Err(Error::UnknownParameter {
                    section: section.to_string(),
                    suggestion: nearest_key(&key, mode.keys()),
                    key,
                })
            }
        };
        *slot = value;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PylorusMode::Open { k_sd } => positive("k_sd", k_sd),
            PylorusMode::Moxon {
                k_sd_max,
                r_a_max,
                sigma,
            } => {
                positive("k_sd_max", k_sd_max)?;
                positive("r_a_max", r_a_max)?;
                positive("sigma", sigma)
            }
            PylorusMode::Alskar {
                k_sd_min,
                k_sd_max,
                m_d50,
                gamma,
            } => {
                positive("k_sd_min", k_sd_min)?;
                positive("k_sd_max", k_sd_max)?;
                positive("m_d50", m_d50)?;
                positive("gamma", gamma)?;
                if k_sd_min > k_sd_max {
                    return Err(Error::invalid("k_sd_min", "must not exceed k_sd_max"));
                }
                Ok(())
            }
        }
    }
}

/// `k_sd^max / (1 + exp(σ(R_A − R_A,max)))`.
pub fn k_sd_moxon(r_a: f64, k_sd_max: f64, r_a_max: f64, sigma: f64) -> f64 {
    let z = sigma * (r_a - r_a_max);
    if z > 0.0 {
        let e = (-z).exp();
        k_sd_max * e / (1.0 + e)
    } else {
        k_sd_max / (1.0 + z.exp())
    }
}

/// `k_sd^min + (k_sd^max − k_sd^min)(1 − m_d^γ/(m_d50^γ + m_d^γ))`.
pub fn k_sd_alskar(m_d: f64, k_sd_min: f64, k_sd_max: f64, m_d50: f64, gamma: f64) -> f64 {
    k_sd_min + (k_sd_max - k_sd_min) * (1.0 - hill_fraction(m_d, m_d50, gamma))
}

#[derive(Debug, Clone)]
pub struct CstrPfr {
    pub params: CstrPfrParams,
    pub mode: PylorusMode,
    disc: SpatialDiscretization,
    flux: PfrFluxSpec,
    accounting: bool,
    name: String,
}

impl CstrPfr {
    pub fn new(
        params: CstrPfrParams,
        mode: PylorusMode,
        scheme: Scheme,
        resolution: usize,
    ) -> Result<Self> {
        params.check()?;
        let disc =
            SpatialDiscretization::build(scheme, params.z0, params.zf, params.area(), resolution)?;
        Self::with_discretization(params, mode, disc)
    }

    /// Use a prebuilt discretization of `[z0, zf]` with cross-section `A_si`.
    pub fn with_discretization(
        params: CstrPfrParams,
        mode: PylorusMode,
        disc: SpatialDiscretization,
    ) -> Result<Self> {
        params.check()?;
        mode.validate()?;
        Ok(Self {
            name: format!("cstr_pfr_{}", mode.name()),
            flux: params.flux(),
            params,
            mode,
            disc,
            accounting: false,
        })
    }

    /// Append two states integrating the absorbed mass and the mass that
    /// left through the outlet.
    pub fn with_accounting(mut self, on: bool) -> Self {
        self.accounting = on;
        self
    }

    pub fn discretization(&self) -> &SpatialDiscretization {
        &self.disc
    }

    pub fn intestine<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[1..1 + self.disc.n_dofs()]
    }

    /// `A_si ∫ Q_a dz`.
    pub fn rate_of_appearance(&self, dofs: &[f64]) -> f64 {
        self.params.absorption_rate() * self.disc.total(dofs)
    }

    pub fn intestine_mass(&self, dofs: &[f64]) -> f64 {
        self.disc.total(dofs)
    }

    pub fn duodenum_mass(&self, dofs: &[f64]) -> f64 {
        self.disc
            .partial(dofs, self.params.z_d())
            .expect("z_d lies inside the domain")
    }

    pub fn outlet_flow(&self, dofs: &[f64]) -> f64 {
        self.disc.outlet_flow(&self.flux, dofs)
    }

    pub fn k_sd(&self, dofs: &[f64]) -> f64 {
        match self.mode {
            PylorusMode::Open { k_sd } => k_sd,
            PylorusMode::Moxon {
                k_sd_max,
                r_a_max,
                sigma,
            } => k_sd_moxon(self.rate_of_appearance(dofs), k_sd_max, r_a_max, sigma),
            PylorusMode::Alskar {
                k_sd_min,
                k_sd_max,
                m_d50,
                gamma,
            } => k_sd_alskar(self.duodenum_mass(dofs), k_sd_min, k_sd_max, m_d50, gamma),
        }
    }

    /// `(absorbed, outflow)` accumulators, when enabled.
    pub fn accumulated(&self, x: &[f64]) -> Option<(f64, f64)> {
        let n = 1 + self.disc.n_dofs();
        self.accounting.then(|| (x[n], x[n + 1]))
    }

    pub fn derivative(&self, x: &[f64], d: f64, dx: &mut [f64]) {
        let n = self.disc.n_dofs();
        let dofs = &x[1..1 + n];
        let f_sd = self.k_sd(dofs) * x[0];
        dx[0] = d - f_sd;
        let k_a = self.params.absorption_rate();
        self.disc
            .rhs(&self.flux, f_sd, |c| -k_a * c, dofs, &mut dx[1..1 + n]);
        if self.accounting {
            dx[1 + n] = self.rate_of_appearance(dofs);
            dx[2 + n] = self.outlet_flow(dofs);
        }
    }
}

impl MealModel for CstrPfr {
    fn name(&self) -> &str {
        &self.name
    }

    fn state_labels(&self) -> Vec<String> {
        let prefix = match self.disc.scheme() {
            Scheme::FiniteVolume => "m",
            Scheme::SpectralGalerkin => "c",
        };
        let mut labels = vec!["m_s".to_string()];
        labels.extend((0..self.disc.n_dofs()).map(|i| format!("{prefix}_{i}")));
        if self.accounting {
            labels.push("absorbed".into());
            labels.push("outflow".into());
        }
        labels
    }

    fn n_states(&self) -> usize {
        1 + self.disc.n_dofs() + if self.accounting { 2 } else { 0 }
    }

    fn rhs(&self, _t: f64, x: &[f64], d: f64, _memory: &MealMemory, dx: &mut [f64]) {
        self.derivative(x, d, dx);
    }

    fn output(&self, x: &[f64]) -> f64 {
        self.rate_of_appearance(self.intestine(x))
    }

    fn injection(&self, _x: &[f64]) -> Option<Vec<f64>> {
        let mut e = vec![0.0; self.n_states()];
        e[0] = 1.0;
        Some(e)
    }

    /// Probed column by column from the right-hand side; only the open
    /// pylorus gives a linear model.
    fn linear_realization(&self) -> Option<LinearRealization> {
        if !matches!(self.mode, PylorusMode::Open { .. }) {
            return None;
        }
        let n = self.n_states();
        let mut a = DMatrix::zeros(n, n);
        let mut x = vec![0.0; n];
        let mut dx = vec![0.0; n];
        let mut c = DMatrix::zeros(1, n);
        for j in 0..n {
            x[j] = 1.0;
            self.derivative(&x, 0.0, &mut dx);
            a.set_column(j, &nalgebra::DVector::from_column_slice(&dx));
            c[(0, j)] = self.output(&x);
            x[j] = 0.0;
        }
        self.derivative(&x, 1.0, &mut dx);
        let b = DMatrix::from_column_slice(n, 1, &dx);
        LinearRealization::new(a, b, c, DMatrix::zeros(1, 1))
            .ok()
            .map(|r| {
                r.with_labels(self.state_labels())
                    .with_provenance("probed from the semidiscretized right-hand side")
            })
    }

    fn linear_in_meal_size(&self) -> bool {
        matches!(self.mode, PylorusMode::Open { .. })
    }

    fn body_weight(&self) -> f64 {
        self.params.bw
    }
}
