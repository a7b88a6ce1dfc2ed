//! Three-compartment gastrointestinal model with nonlinear gastric emptying
//! (Dalla Man et al., 2006/2007).

use super::params::{fraction, parameter_set, positive};
use crate::engine::{MealEvent, MealMemory, MealModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DallaManParams {
    pub k_max: f64,
    pub k_min: f64,
    pub k_abs: f64,
    pub k_gri: f64,
    pub b: f64,
    pub c: f64,
    pub f: f64,
    pub bw: f64,
}

impl Default for DallaManParams {
    fn default() -> Self {
        Self {
            k_max: 0.0465,
            k_min: 0.0076,
            k_abs: 0.023,
            k_gri: 0.0465,
            b: 0.69,
            c: 0.17,
            f: 0.90,
            bw: 91.0,
        }
    }
}

impl DallaManParams {
    fn check(&self) -> Result<()> {
        positive("k_min", self.k_min)?;
        positive("k_max", self.k_max)?;
        if self.k_min > self.k_max {
            return Err(Error::invalid("k_min", "must not exceed k_max"));
        }
        positive("k_abs", self.k_abs)?;
        positive("k_gri", self.k_gri)?;
        if !(0.0 < self.c && self.c < self.b && self.b < 1.0) {
            return Err(Error::invalid("b", "need 0 < c < b < 1"));
        }
        fraction("f", self.f)?;
        positive("bw", self.bw)
    }
}

parameter_set!(DallaManParams, "dalla_man", {
    "k_max" => k_max,
    "k_min" => k_min,
    "k_abs" => k_abs,
    "k_gri" => k_gri,
    "b" => b,
    "c" => c,
    "f" => f,
    "bw" => bw,
});

/// Gastric emptying rate `k_empt(Q_sto, D)` in 1/min.
pub fn dalla_man_kempt(q_sto: f64, meal: f64, p: &DallaManParams) -> Result<f64> {
    if !(meal > 0.0) {
        return Err(Error::invalid(
            "D",
            "meal carbohydrate content must be positive",
        ));
    }
    let alpha = 5.0 / (2.0 * meal * (1.0 - p.b));
    let beta = 5.0 / (2.0 * meal * p.c);
    Ok(p.k_min
        + 0.5
            * (p.k_max - p.k_min)
            * ((alpha * (q_sto - p.b * meal)).tanh() - (beta * (q_sto - p.c * meal)).tanh() + 2.0))
}

#[derive(Debug, Clone)]
pub struct DallaMan {
    pub params: DallaManParams,
}

impl DallaMan {
    pub fn new(params: DallaManParams) -> Result<Self> {
        params.check()?;
        Ok(Self { params })
    }

    /// Emptying rate; with no meal on record the stomach is empty and the
    /// rate is taken as `k_min`.
    fn kempt(&self, q_sto: f64, meal: f64) -> f64 {
        dalla_man_kempt(q_sto, meal, &self.params).unwrap_or(self.params.k_min)
    }

    /// State derivative for `(Q_sto1, Q_sto2, Q_gut)`.
    pub fn derivative(&self, x: &[f64], d: f64, meal: f64, dx: &mut [f64]) {
        let p = &self.params;
        let r12 = p.k_gri * x[0];
        let r_sto_gut = self.kempt(x[0] + x[1], meal) * x[1];
        let r_gut_pla = p.k_abs * x[2];
        dx[0] = d - r12;
        dx[1] = r12 - r_sto_gut;
        dx[2] = r_sto_gut - r_gut_pla;
    }
}

impl MealModel for DallaMan {
    fn name(&self) -> &str {
        "dalla_man"
    }

    fn state_labels(&self) -> Vec<String> {
        vec!["Q_sto1".into(), "Q_sto2".into(), "Q_gut".into()]
    }

    fn n_states(&self) -> usize {
        3
    }

    fn rhs(&self, _t: f64, x: &[f64], d: f64, memory: &MealMemory, dx: &mut [f64]) {
        self.derivative(x, d, memory.meal_size, dx);
    }

    fn output(&self, x: &[f64]) -> f64 {
        self.params.f * self.params.k_abs * x[2]
    }

    fn injection(&self, _x: &[f64]) -> Option<Vec<f64>> {
        Some(vec![1.0, 0.0, 0.0])
    }

    /// The emptying curve is governed by the new meal plus whatever is still
    /// in the stomach when it starts.
    fn remember_meal(&self, memory: &mut MealMemory, x: &[f64], event: &MealEvent) {
        memory.last_meal = Some(event.time);
        memory.meal_size = event.carbs + x[0] + x[1];
    }

    fn linear_in_meal_size(&self) -> bool {
        true
    }

    fn body_weight(&self) -> f64 {
        self.params.bw
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kempt_is_scale_free() {
        let p = DallaManParams::default();
        for i in 0..=20 {
            let q = 0.1 * i as f64;
            let a = dalla_man_kempt(q * 1e4, 1e4, &p).unwrap();
            let b = dalla_man_kempt(q * 1e5, 1e5, &p).unwrap();
            assert!((a - b).abs() <= 1e-12, "q = {q}");
        }
    }

    #[test]
    fn kempt_saturates_at_kmax() {
        let p = DallaManParams::default();
        let k = dalla_man_kempt(1e6 * 9e4, 9e4, &p).unwrap();
        assert!((k - p.k_max).abs() < 1e-15);
    }

    #[test]
    fn kempt_at_empty_stomach() {
        let p = DallaManParams::default();
        let want = p.k_min
            + 0.5
                * (p.k_max - p.k_min)
                * ((-2.5 * p.b / (1.0 - p.b)).tanh() - (-2.5f64).tanh() + 2.0);
        let got = dalla_man_kempt(0.0, 5e4, &p).unwrap();
        assert!((got - want).abs() < 1e-16);
        // high-precision evaluation of the same expression (mpmath, 50 digits)
        assert!((got - 0.046_240_219_138_252_147).abs() < 1e-16, "{got}");
    }

    #[test]
    fn kempt_rejects_nonpositive_meal() {
        assert!(dalla_man_kempt(0.0, 0.0, &DallaManParams::default()).is_err());
    }

    #[test]
    fn output_and_flows() {
        let m = DallaMan::new(DallaManParams::default()).unwrap();
        assert!((m.output(&[0.0, 0.0, 1000.0]) - 20.7).abs() < 1e-12);
        let mut dx = [0.0; 3];
        m.derivative(&[0.0; 3], 0.0, 0.0, &mut dx);
        assert_eq!(dx, [0.0; 3]);
        let x = [1234.0, 5678.0, 910.0];
        m.derivative(&x, 37.0, 9e4, &mut dx);
        let total: f64 = dx.iter().sum();
        assert!((total - (37.0 - m.params.k_abs * x[2])).abs() < 1e-12);
    }

    #[test]
    fn meal_memory_includes_residual() {
        let m = DallaMan::new(DallaManParams::default()).unwrap();
        let mut mem = MealMemory::default();
        m.remember_meal(
            &mut mem,
            &[100.0, 50.0, 7.0],
            &MealEvent::impulse(60.0, 1000.0),
        );
        assert_eq!(mem.meal_size, 1150.0);
        assert_eq!(mem.last_meal, Some(60.0));
    }
}
