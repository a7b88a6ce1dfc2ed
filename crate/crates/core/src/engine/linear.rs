//! Continuous-time linear state-space models `ẋ = A x + B u`, `y = C x + D u`.

use nalgebra::{DMatrix, DVector};

use super::expm::expm;
use super::{MealMemory, MealModel, MealSchedule, StateJump, Trajectory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRealization {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub state_labels: Vec<String>,
    /// Where the matrix entries come from, e.g. `"A_c = [[-1/tau_D, 0], ...]"`.
    pub provenance: String,
}

impl LinearRealization {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let dims = [
            ("A columns", n, a.ncols()),
            ("B rows", n, b.nrows()),
            ("C columns", n, c.ncols()),
            ("D rows", c.nrows(), d.nrows()),
            ("D columns", b.ncols(), d.ncols()),
        ];
        for (what, expected, found) in dims {
            if expected != found {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    found,
                });
            }
        }
        Ok(Self {
            state_labels: (0..n).map(|i| format!("x{i}")).collect(),
            provenance: String::new(),
            a,
            b,
            c,
            d,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.state_labels = labels;
        self
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.ncols()
    }

    /// Steady-state gain `D − C A⁻¹ B`, if `A` is invertible.
    pub fn dc_gain(&self) -> Option<DMatrix<f64>> {
        let x = self.a.clone().lu().solve(&self.b)?;
        Some(&self.d - &self.c * x)
    }

    /// Output `C x + D u`.
    pub fn output(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        let y = &self.c * DVector::from_column_slice(x) + &self.d * DVector::from_column_slice(u);
        y.iter().copied().collect()
    }
}

/// Exact solution of `ẋ = A x + B u` with constant `u` after `dt`.
///
/// Uses `exp([[A, B u], [0, 0]]·dt)`, which needs no inverse of `A` and so
/// covers singular `A` as well.
pub fn linear_step(r: &LinearRealization, x0: &[f64], u: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = r.n_states();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            what: "state",
            expected: n,
            found: x0.len(),
        });
    }
    if u.len() != r.n_inputs() {
        return Err(Error::DimensionMismatch {
            what: "input",
            expected: r.n_inputs(),
            found: u.len(),
        });
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let (phi, gamma) = propagator(r, u, dt);
    Ok((phi * DVector::from_column_slice(x0) + gamma)
        .iter()
        .copied()
        .collect())
}

/// `(exp(A dt), ∫₀^dt exp(A s) ds · B u)`.
fn propagator(r: &LinearRealization, u: &[f64], dt: f64) -> (DMatrix<f64>, DVector<f64>) {
    let n = r.n_states();
    let bu = &r.b * DVector::from_column_slice(u);
    let mut aug = DMatrix::<f64>::zeros(n + 1, n + 1);
    aug.view_mut((0, 0), (n, n)).copy_from(&(&r.a * dt));
    aug.view_mut((0, n), (n, 1)).copy_from(&(bu * dt));
    let e = expm(&aug);
    (
        e.view((0, 0), (n, n)).into_owned(),
        e.view((0, n), (n, 1)).column(0).into_owned(),
    )
}

/// A linear single-input meal model: `ẋ = A_c x + B_c d`, `R_A = C_c x`.
#[derive(Debug, Clone)]
pub struct LinearModel {
    name: String,
    realization: LinearRealization,
    body_weight: f64,
}

impl LinearModel {
    pub fn new(
        name: impl Into<String>,
        realization: LinearRealization,
        body_weight: f64,
    ) -> Result<Self> {
        if realization.n_inputs() != 1 || realization.c.nrows() != 1 {
            return Err(Error::DimensionMismatch {
                what: "meal model inputs/outputs",
                expected: 1,
                found: realization.n_inputs().max(realization.c.nrows()),
            });
        }
        Ok(Self {
            name: name.into(),
            realization,
            body_weight,
        })
    }

    pub fn realization(&self) -> &LinearRealization {
        &self.realization
    }

    /// Exact sampled response to a meal schedule using the matrix exponential
    /// on each constant-input interval.
    pub fn simulate_exact(
        &self,
        x0: &[f64],
        schedule: &MealSchedule,
        horizon: f64,
        output_interval: f64,
    ) -> Result<Trajectory> {
        let r = &self.realization;
        let n = r.n_states();
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                what: "initial state",
                expected: n,
                found: x0.len(),
            });
        }
        if !(horizon > 0.0 && output_interval > 0.0) {
            return Err(Error::InvalidSpan {
                start: 0.0,
                end: horizon,
            });
        }
        // (time, new input rate or None for an impulse, impulse carbs)
        let mut actions: Vec<(f64, Option<f64>, f64)> = Vec::new();
        for e in schedule.events() {
            if e.is_impulse() {
                actions.push((e.time, None, e.carbs));
            } else {
                actions.push((e.time, Some(e.carbs / e.duration), 0.0));
                actions.push((e.time + e.duration, Some(0.0), 0.0));
            }
        }
        actions.sort_by(|a, b| a.0.total_cmp(&b.0));
        let grid = super::output_grid(0.0, horizon, output_interval);
        let mut traj = Trajectory::new(self);
        let mut x = DVector::from_column_slice(x0);
        let mut t = 0.0;
        let mut rate = 0.0;
        let mut ai = 0;
        let snap = 1e-9 * output_interval;
        let mut gi = 0;
        let injection = r.b.column(0).into_owned();
        loop {
            while ai < actions.len() && actions[ai].0 <= t + snap {
                match actions[ai].1 {
                    Some(v) => rate = v,
                    None => {
                        let before: Vec<f64> = x.iter().copied().collect();
                        x += &injection * actions[ai].2;
                        traj.jumps.push(StateJump {
                            time: t,
                            carbs: actions[ai].2,
                            before,
                            after: x.iter().copied().collect(),
                        });
                    }
                }
                ai += 1;
            }
            while gi < grid.len() && grid[gi] <= t + snap {
                traj.push(self, grid[gi], x.as_slice());
                gi += 1;
            }
            if t >= horizon {
                break;
            }
            let t_next_action = actions.get(ai).map_or(horizon, |a| a.0.min(horizon));
            let t_next = grid
                .get(gi)
                .map_or(t_next_action, |&g| g.min(t_next_action));
            let (phi, gamma) = propagator(r, &[rate], t_next - t);
            x = phi * x + gamma;
            t = t_next;
        }
        Ok(traj)
    }
}

impl MealModel for LinearModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn state_labels(&self) -> Vec<String> {
        self.realization.state_labels.clone()
    }

    fn n_states(&self) -> usize {
        self.realization.n_states()
    }

    fn rhs(&self, _t: f64, x: &[f64], d: f64, _memory: &MealMemory, dx: &mut [f64]) {
        let a = &self.realization.a;
        let b = &self.realization.b;
        for (i, dxi) in dx.iter_mut().enumerate() {
            let mut s = b[(i, 0)] * d;
            for (j, xj) in x.iter().enumerate() {
                s += a[(i, j)] * xj;
            }
            *dxi = s;
        }
    }

    fn output(&self, x: &[f64]) -> f64 {
        let c = &self.realization.c;
        x.iter().enumerate().map(|(j, xj)| c[(0, j)] * xj).sum()
    }

    fn injection(&self, _x: &[f64]) -> Option<Vec<f64>> {
        Some(self.realization.b.column(0).iter().copied().collect())
    }

    fn linear_realization(&self) -> Option<LinearRealization> {
        Some(self.realization.clone())
    }

    fn linear_in_meal_size(&self) -> bool {
        true
    }

    fn body_weight(&self) -> f64 {
        self.body_weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(a: DMatrix<f64>, b: DMatrix<f64>) -> LinearRealization {
        let n = a.nrows();
        let m = b.ncols();
        LinearRealization::new(a, b, DMatrix::identity(n, n), DMatrix::zeros(n, m)).unwrap()
    }

    #[test]
    fn pure_integrator() {
        let r = real(DMatrix::zeros(2, 2), DMatrix::identity(2, 2));
        let x = linear_step(&r, &[1.0, -2.0], &[0.5, 3.0], 4.0).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-14 && (x[1] - 10.0).abs() < 1e-13);
    }

    #[test]
    fn decoupled_decay() {
        let r = real(-DMatrix::identity(3, 3), DMatrix::zeros(3, 1));
        let v = [1.0, -2.0, 0.25];
        let dt = 1.7;
        let x = linear_step(&r, &v, &[0.0], dt).unwrap();
        for (xi, vi) in x.iter().zip(v) {
            assert!((xi - vi * (-dt).exp()).abs() < 1e-15);
        }
    }

    // Block formula for A = diag(N, A22) with N strictly upper triangular:
    // ∫₀^dt e^{Ns} ds = Σ_k N^k dt^{k+1}/(k+1)!, and A22⁻¹(e^{A22 dt} − I) for the
    // non-singular block.
    #[test]
    fn singular_block_formula() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 1.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.4]);
        let b = DMatrix::from_column_slice(3, 1, &[0.3, 1.0, 2.0]);
        let r = real(a, b);
        let (x0, u, dt) = ([1.0, 2.0, 3.0], [0.7], 2.5);
        let x = linear_step(&r, &x0, &u, dt).unwrap();

        let bu = [0.3 * 0.7, 0.7, 1.4];
        // nilpotent block N = [[0, 1.5], [0, 0]]: e^{N dt} = I + N dt
        let want0 = x0[0] + 1.5 * dt * x0[1] + bu[0] * dt + 1.5 * bu[1] * dt * dt / 2.0;
        let want1 = x0[1] + bu[1] * dt;
        let lam: f64 = -0.4;
        let want2 = (lam * dt).exp() * x0[2] + ((lam * dt).exp() - 1.0) / lam * bu[2];
        assert!((x[0] - want0).abs() < 1e-13);
        assert!((x[1] - want1).abs() < 1e-13);
        assert!((x[2] - want2).abs() < 1e-13);
    }

    #[test]
    fn dimension_mismatch() {
        let r = real(DMatrix::zeros(2, 2), DMatrix::identity(2, 2));
        assert!(linear_step(&r, &[1.0], &[0.0, 0.0], 1.0).is_err());
        assert!(linear_step(&r, &[1.0, 1.0], &[0.0], 1.0).is_err());
        assert!(LinearRealization::new(
            DMatrix::zeros(2, 2),
            DMatrix::zeros(3, 1),
            DMatrix::zeros(1, 2),
            DMatrix::zeros(1, 1)
        )
        .is_err());
    }
}
