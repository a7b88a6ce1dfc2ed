//! Time delays `y(t) = u(t − τ_d)` and their finite-dimensional approximations.
//!
//! The delay is split into `M` stages of `τ_d/M` each. Every stage is then
//! replaced by a first-order lag, a Padé(1,1) all-pass section, or one upwind
//! cell of a transport pipe. The algebraic variant multiplies the input by a
//! logistic ramp instead.

use nalgebra::{Complex, DMatrix, DVector};

use crate::engine::trapezoid;
use crate::engine::{linear_step, LinearRealization};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaySpec {
    pub tau_d: f64,
    pub stages: usize,
}

impl DelaySpec {
    pub fn new(tau_d: f64, stages: usize) -> Result<Self> {
        if !(tau_d > 0.0 && tau_d.is_finite()) {
            return Err(Error::invalid("tau_d", "delay must be positive"));
        }
        if stages == 0 {
            return Err(Error::invalid("stages", "need at least one stage"));
        }
        Ok(Self { tau_d, stages })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayKind {
    Lag,
    Pade,
    Transport,
    Algebraic,
}

impl DelayKind {
    pub const ALL: [DelayKind; 4] = [
        DelayKind::Lag,
        DelayKind::Pade,
        DelayKind::Transport,
        DelayKind::Algebraic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DelayKind::Lag => "lag",
            DelayKind::Pade => "pade",
            DelayKind::Transport => "transport",
            DelayKind::Algebraic => "algebraic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DelayRealization {
    Linear {
        kind: DelayKind,
        realization: LinearRealization,
    },
    /// `ỹ(t) = τ(t)·u(t)` with `τ` the logistic ramp of [`algebraic_lag`].
    Algebraic { sigma: f64, t_50: f64 },
}

impl DelayRealization {
    pub fn kind(&self) -> DelayKind {
        match self {
            DelayRealization::Linear { kind, .. } => *kind,
            DelayRealization::Algebraic { .. } => DelayKind::Algebraic,
        }
    }

    pub fn linear(&self) -> Option<&LinearRealization> {
        match self {
            DelayRealization::Linear { realization, .. } => Some(realization),
            DelayRealization::Algebraic { .. } => None,
        }
    }

    /// Response to `u` sampled on `times` (zero-order hold between samples,
    /// zero initial state).
    pub fn respond(&self, times: &[f64], u: &[f64]) -> Result<Vec<f64>> {
        if times.len() != u.len() {
            return Err(Error::DimensionMismatch {
                what: "input samples",
                expected: times.len(),
                found: u.len(),
            });
        }
        match self {
            DelayRealization::Algebraic { sigma, t_50 } => Ok(times
                .iter()
                .zip(u)
                .map(|(&t, &u)| algebraic_lag(t, *sigma, *t_50) * u)
                .collect()),
            DelayRealization::Linear { realization: r, .. } => {
                let mut x = vec![0.0; r.n_states()];
                let mut y = Vec::with_capacity(times.len());
                for k in 0..times.len() {
                    if k > 0 {
                        let dt = times[k] - times[k - 1];
                        if dt > 0.0 {
                            x = linear_step(r, &x, &[u[k - 1]], dt)?;
                        }
                    }
                    y.push(r.output(&x, &[u[k]])[0]);
                }
                Ok(y)
            }
        }
    }
}

/// `u(t − τ_d)` for an input known from `start` onwards.
pub struct ExactDelay<F: Fn(f64) -> f64> {
    u: F,
    tau_d: f64,
    start: f64,
}

impl<F: Fn(f64) -> f64> ExactDelay<F> {
    pub fn new(u: F, tau_d: f64, start: f64) -> Result<Self> {
        if !(tau_d >= 0.0) {
            return Err(Error::invalid("tau_d", "delay must be non-negative"));
        }
        Ok(Self { u, tau_d, start })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let s = t - self.tau_d;
        if s < self.start {
            return Err(Error::HistoryUnavailable {
                t,
                start: self.start + self.tau_d,
            });
        }
        Ok((self.u)(s))
    }
}

/// The exact delay written as `M` cascaded delays of `τ_d/M`.
pub fn exact_delay_series<F: Fn(f64) -> f64>(
    u: F,
    spec: &DelaySpec,
    start: f64,
    t: f64,
) -> Result<f64> {
    let step = spec.tau_d / spec.stages as f64;
    let mut s = t;
    for _ in 0..spec.stages {
        s -= step;
    }
    if s < start - 1e-12 * spec.tau_d.max(1.0) {
        return Err(Error::HistoryUnavailable {
            t,
            start: start + spec.tau_d,
        });
    }
    Ok(u(s.max(start)))
}

fn chain_matrices(spec: &DelaySpec) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let m = spec.stages;
    let k = m as f64 / spec.tau_d;
    let mut a = DMatrix::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = -k;
        if i > 0 {
            a[(i, i - 1)] = k;
        }
    }
    let mut b = DMatrix::zeros(m, 1);
    b[(0, 0)] = k;
    let mut c = DMatrix::zeros(1, m);
    c[(0, m - 1)] = 1.0;
    (a, b, c)
}

/// `M` first-order lags `ẋ_i = (M/τ_d)(x_{i−1} − x_i)`, `x_0 = u`, `y = x_M`.
pub fn lag_chain(spec: &DelaySpec) -> Result<DelayRealization> {
    let (a, b, c) = chain_matrices(spec);
    let realization = LinearRealization::new(a, b, c, DMatrix::zeros(1, 1))?.with_provenance(
        format!("lag chain, M = {}, tau_d = {}", spec.stages, spec.tau_d),
    );
    Ok(DelayRealization::Linear {
        kind: DelayKind::Lag,
        realization,
    })
}

/// `M` cascaded Padé(1,1) sections `(1 − a s)/(1 + a s)`, `a = τ_d/(2M)`.
///
/// Stage `i` has input `u_i`, state `ẋ_i = (u_i − x_i)/a` and output
/// `y_i = 2x_i − u_i`, which is the next stage's input.
pub fn pade_chain(spec: &DelaySpec) -> Result<DelayRealization> {
    let m = spec.stages;
    let a_c = spec.tau_d / (2.0 * m as f64);
    // u_i = Σ_j g[i][j] x_j + h[i] u
    let mut g = DMatrix::<f64>::zeros(m + 1, m);
    let mut h = vec![0.0; m + 1];
    h[0] = 1.0;
    for i in 0..m {
        for j in 0..m {
            g[(i + 1, j)] = -g[(i, j)];
        }
        g[(i + 1, i)] += 2.0;
        h[i + 1] = -h[i];
    }
    let mut a = DMatrix::zeros(m, m);
    let mut b = DMatrix::zeros(m, 1);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = g[(i, j)] / a_c;
        }
        a[(i, i)] -= 1.0 / a_c;
        b[(i, 0)] = h[i] / a_c;
    }
    let c = g.rows(m, 1).into_owned();
    let d = DMatrix::from_element(1, 1, h[m]);
    let realization = LinearRealization::new(a, b, c, d)?.with_provenance(format!(
        "Padé(1,1) cascade, M = {}, tau_d = {}",
        spec.stages, spec.tau_d
    ));
    Ok(DelayRealization::Linear {
        kind: DelayKind::Pade,
        realization,
    })
}

/// Upwind discretization of `∂_t c = −v ∂_z c` on a unit pipe with `M` cells
/// and `v = 1/τ_d`. The cell equations are `ċ_i = (v/Δz)(c_{i−1} − c_i)`,
/// which is the lag chain again.
pub fn transport_chain(spec: &DelaySpec) -> Result<DelayRealization> {
    let length = 1.0;
    let v = length / spec.tau_d;
    let dz = length / spec.stages as f64;
    let m = spec.stages;
    let k = v / dz;
    let mut a = DMatrix::zeros(m, m);
    let mut b = DMatrix::zeros(m, 1);
    for i in 0..m {
        a[(i, i)] = -k;
        if i > 0 {
            a[(i, i - 1)] = k;
        } else {
            b[(0, 0)] = k;
        }
    }
    let mut c = DMatrix::zeros(1, m);
    c[(0, m - 1)] = 1.0;
    let realization = LinearRealization::new(a, b, c, DMatrix::zeros(1, 1))?.with_provenance(
        format!("upwind transport, M = {} cells, v = {v}", spec.stages),
    );
    Ok(DelayRealization::Linear {
        kind: DelayKind::Transport,
        realization,
    })
}

/// Logistic ramp `1/(1 + exp(−σ(t − t_50)))`.
pub fn algebraic_lag(t: f64, sigma: f64, t_50: f64) -> f64 {
    let z = -sigma * (t - t_50);
    if z > 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

/// Algebraic approximation centred on the delay (`t_50 = τ_d`).
pub fn algebraic_delay(spec: &DelaySpec, sigma: f64) -> Result<DelayRealization> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma", "steepness must be positive"));
    }
    Ok(DelayRealization::Algebraic {
        sigma,
        t_50: spec.tau_d,
    })
}

pub fn realize(kind: DelayKind, spec: &DelaySpec, sigma: f64) -> Result<DelayRealization> {
    match kind {
        DelayKind::Lag => lag_chain(spec),
        DelayKind::Pade => pade_chain(spec),
        DelayKind::Transport => transport_chain(spec),
        DelayKind::Algebraic => algebraic_delay(spec, sigma),
    }
}

/// `C (iω I − A)⁻¹ B + D`.
pub fn frequency_response(r: &LinearRealization, omega: f64) -> Option<Complex<f64>> {
    let n = r.n_states();
    let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex::new(-r.a[(i, j)], 0.0);
        }
        m[(i, i)] += Complex::new(0.0, omega);
    }
    let b = DVector::from_iterator(n, r.b.column(0).iter().map(|&v| Complex::new(v, 0.0)));
    let x = m.lu().solve(&b)?;
    let cx: Complex<f64> = (0..n).map(|j| x[j] * r.c[(0, j)]).sum();
    Some(cx + r.d[(0, 0)])
}

/// Unit-step responses of one approximation against the exact delay.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayComparison {
    pub kind: DelayKind,
    pub times: Vec<f64>,
    pub exact: Vec<f64>,
    pub approx: Vec<f64>,
}

impl DelayComparison {
    /// `(∫ (ỹ − y)² dt)^{1/2}` over the sampled window.
    pub fn l2_error(&self) -> f64 {
        let sq: Vec<f64> = self
            .exact
            .iter()
            .zip(&self.approx)
            .map(|(y, a)| (a - y).powi(2))
            .collect();
        trapezoid(&self.times, &sq).sqrt()
    }
}

/// Step input `u = 1` for `t ≥ 0`, compared over `[0, horizon]` sampled every `dt`.
pub fn step_comparison(
    kind: DelayKind,
    spec: &DelaySpec,
    sigma: f64,
    horizon: f64,
    dt: f64,
) -> Result<DelayComparison> {
    let r = realize(kind, spec, sigma)?;
    let n = (horizon / dt).round() as usize;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    let u = vec![1.0; times.len()];
    let approx = r.respond(&times, &u)?;
    let exact = times
        .iter()
        .map(|&t| if t >= spec.tau_d { 1.0 } else { 0.0 })
        .collect();
    Ok(DelayComparison {
        kind,
        times,
        exact,
        approx,
    })
}

/// The four-panel dataset: input, exact delay and every approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayDemo {
    pub spec: DelaySpec,
    pub sigma: f64,
    pub times: Vec<f64>,
    pub input: Vec<f64>,
    pub exact: Vec<f64>,
    /// One series per kind, in [`DelayKind::ALL`] order.
    pub approximations: Vec<(DelayKind, Vec<f64>)>,
}

pub fn delay_demo(spec: &DelaySpec, sigma: f64, horizon: f64, dt: f64) -> Result<DelayDemo> {
    let mut approximations = Vec::new();
    let mut base = None;
    for kind in DelayKind::ALL {
        let cmp = step_comparison(kind, spec, sigma, horizon, dt)?;
        approximations.push((kind, cmp.approx.clone()));
        base.get_or_insert(cmp);
    }
    let base = base.expect("at least one kind");
    Ok(DelayDemo {
        spec: *spec,
        sigma,
        input: vec![1.0; base.times.len()],
        times: base.times,
        exact: base.exact,
        approximations,
    })
}
