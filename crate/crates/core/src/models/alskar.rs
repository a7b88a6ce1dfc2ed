//! Four-compartment model with Hill-type pyloric feedback and
//! Michaelis–Menten absorption (Alskär et al., 2016).

use super::params::{fraction, parameter_set, positive};
use crate::delay::algebraic_lag;
use crate::engine::{MealMemory, MealModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlskarParams {
    pub k_w: f64,
    pub ig_d50: f64,
    pub gamma: f64,
    pub l_d: f64,
    pub l_j: f64,
    /// Small-intestinal transit time, min.
    pub t: f64,
    pub sigma: f64,
    pub t_50: f64,
    pub k_mg: f64,
    pub r_d_max: f64,
    pub r_j_max: f64,
    pub r_i_max: f64,
    pub f_p: f64,
    pub bw: f64,
}

impl Default for AlskarParams {
    fn default() -> Self {
        Self {
            k_w: 0.14,
            ig_d50: 7420.0,
            gamma: 14.0,
            l_d: 0.08,
            l_j: 0.37,
            t: 240.0,
            sigma: 10.0,
            t_50: 5.0,
            k_mg: 6320.0,
            r_d_max: 580.0,
            r_j_max: 2060.0,
            r_i_max: 1330.0,
            f_p: 1.0,
            bw: 82.0,
        }
    }
}

impl AlskarParams {
    fn check(&self) -> Result<()> {
        for (k, v) in [
            ("k_w", self.k_w),
            ("ig_d50", self.ig_d50),
            ("l_d", self.l_d),
            ("l_j", self.l_j),
            ("t", self.t),
            ("sigma", self.sigma),
            ("t_50", self.t_50),
            ("k_mg", self.k_mg),
            ("r_d_max", self.r_d_max),
            ("r_j_max", self.r_j_max),
            ("r_i_max", self.r_i_max),
            ("bw", self.bw),
        ] {
            positive(k, v)?;
        }
        if self.l_d + self.l_j >= 1.0 {
            return Err(Error::invalid("l_j", "l_d + l_j must be below 1"));
        }
        if !(self.gamma >= 1.0) {
            return Err(Error::invalid(
                "gamma",
                "Hill coefficient must be at least 1",
            ));
        }
        fraction("f_p", self.f_p)
    }
}

parameter_set!(AlskarParams, "alskar", {
    "k_w" => k_w,
    "ig_d50" => ig_d50,
    "gamma" => gamma,
    "l_d" => l_d,
    "l_j" => l_j,
    "t" => t,
    "sigma" => sigma,
    "t_50" => t_50,
    "k_mg" => k_mg,
    "r_d_max" => r_d_max,
    "r_j_max" => r_j_max,
    "r_i_max" => r_i_max,
    "f_p" => f_p,
    "bw" => bw,
});

/// `x^γ / (K^γ + x^γ)`, evaluated as a logistic in `ln x` so that large `γ`
/// cannot overflow. Zero for `x ≤ 0`.
pub fn hill_fraction(x: f64, half: f64, gamma: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = gamma * (half.ln() - x.ln());
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

pub fn michaelis_menten(x: f64, r_max: f64, k_m: f64) -> f64 {
    r_max * x / (k_m + x)
}

#[derive(Debug, Clone)]
pub struct Alskar {
    pub params: AlskarParams,
}

impl Alskar {
    pub fn new(params: AlskarParams) -> Result<Self> {
        params.check()?;
        Ok(Self { params })
    }

    /// Pyloric rate constant `k_SD(G_D)`.
    pub fn k_sd(&self, g_d: f64) -> f64 {
        let p = &self.params;
        p.k_w * (1.0 - hill_fraction(g_d, p.ig_d50, p.gamma))
    }

    /// Absorption rates `(R_A,D, R_A,J, R_A,I)`.
    pub fn absorption(&self, x: &[f64]) -> [f64; 3] {
        let p = &self.params;
        [
            michaelis_menten(x[1], p.r_d_max, p.k_mg),
            michaelis_menten(x[2], p.r_j_max, p.k_mg),
            michaelis_menten(x[3], p.r_i_max, p.k_mg),
        ]
    }

    /// Derivative of `(G_S, G_D, G_J, G_I)` given the time since the last meal.
    pub fn derivative(&self, x: &[f64], d: f64, t_since_meal: f64, dx: &mut [f64]) {
        let p = &self.params;
        let lag = algebraic_lag(t_since_meal, p.sigma, p.t_50);
        let r_sd = self.k_sd(x[1]) * lag * x[0];
        let r_dj = x[1] / (p.l_d * p.t);
        let r_ji = x[2] / (p.l_j * p.t);
        let [ra_d, ra_j, ra_i] = self.absorption(x);
        dx[0] = d - r_sd;
        dx[1] = r_sd - r_dj - ra_d;
        dx[2] = r_dj - r_ji - ra_j;
        dx[3] = r_ji - ra_i;
    }
}

impl MealModel for Alskar {
    fn name(&self) -> &str {
        "alskar"
    }

    fn state_labels(&self) -> Vec<String> {
        vec!["G_S".into(), "G_D".into(), "G_J".into(), "G_I".into()]
    }

    fn n_states(&self) -> usize {
        4
    }

    fn rhs(&self, t: f64, x: &[f64], d: f64, memory: &MealMemory, dx: &mut [f64]) {
        self.derivative(x, d, memory.time_since_meal(t), dx);
    }

    fn output(&self, x: &[f64]) -> f64 {
        self.params.f_p * self.absorption(x).iter().sum::<f64>()
    }

    fn injection(&self, _x: &[f64]) -> Option<Vec<f64>> {
        Some(vec![1.0, 0.0, 0.0, 0.0])
    }

    fn linear_in_meal_size(&self) -> bool {
        false
    }

    fn body_weight(&self) -> f64 {
        self.params.bw
    }
}
