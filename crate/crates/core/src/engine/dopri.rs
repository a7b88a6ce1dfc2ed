//! Dormand–Prince 5(4) with PI step-size control and 4th-order dense output.

use crate::error::{Error, Result};

use super::IntegratorOptions;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const MAX_STEPS: usize = 5_000_000;

struct Workspace {
    k: [Vec<f64>; 7],
    y1: Vec<f64>,
    ytmp: Vec<f64>,
    cont: [Vec<f64>; 5],
}

impl Workspace {
    fn new(n: usize) -> Self {
        let v = || vec![0.0; n];
        Self {
            k: [v(), v(), v(), v(), v(), v(), v()],
            y1: v(),
            ytmp: v(),
            cont: [v(), v(), v(), v(), v()],
        }
    }
}

fn check_finite(t: f64, v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteDerivative { t })
    }
}

fn error_scale(opts: &IntegratorOptions, a: f64, b: f64) -> f64 {
    opts.abs_tol + opts.rel_tol * a.abs().max(b.abs())
}

/// Initial step heuristic (Hairer, Nørsett & Wanner, Solving ODEs I, II.4).
fn initial_step<F>(
    f: &mut F,
    t: f64,
    y: &[f64],
    f0: &[f64],
    opts: &IntegratorOptions,
    span: f64,
) -> Result<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len() as f64;
    let (mut dnf, mut dny) = (0.0, 0.0);
    for i in 0..y.len() {
        let sk = error_scale(opts, y[i], y[i]);
        dnf += (f0[i] / sk).powi(2);
        dny += (y[i] / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(opts.max_step).min(span);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(y, f)| y + h * f).collect();
    let mut f1 = vec![0.0; y.len()];
    f(t + h, &y1, &mut f1);
    check_finite(t + h, &f1)?;
    let mut der2 = 0.0;
    for i in 0..y.len() {
        let sk = error_scale(opts, y[i], y[i]);
        der2 += ((f1[i] - f0[i]) / sk).powi(2);
    }
    let der2 = (der2 / n).sqrt() / h;
    let der12 = der2.abs().max((dnf / n).sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    Ok((100.0 * h).min(h1).min(opts.max_step).min(span))
}

/// Integrate `y` from `t0` to `t1` with the right-hand side held fixed.
///
/// `emit_at` lists output times in `(t0, t1]` in ascending order; `emit` is
/// called once for each with the dense-output state.
pub(crate) fn integrate_segment<F, E>(
    mut f: F,
    t0: f64,
    t1: f64,
    y: &mut [f64],
    opts: &IntegratorOptions,
    emit_at: &[f64],
    mut emit: E,
) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    E: FnMut(f64, &[f64]),
{
    let n = y.len();
    let span = t1 - t0;
    if span <= 0.0 {
        for &te in emit_at {
            emit(te, y);
        }
        return Ok(());
    }
    let mut ws = Workspace::new(n);
    f(t0, y, &mut ws.k[0]);
    check_finite(t0, &ws.k[0])?;
    let mut h = initial_step(&mut f, t0, y, &ws.k[0].clone(), opts, span)?;
    let mut t = t0;
    let mut fac_old: f64 = 1e-4;
    let mut next_out = 0;
    let mut rejected_last = false;
    let expo = 0.2 - BETA * 0.75;

    for _ in 0..MAX_STEPS {
        let last = t + h >= t1 - 1e-12 * t1.abs().max(1.0);
        if last {
            h = t1 - t;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        let Workspace { k, y1, ytmp, cont } = &mut ws;
        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k[0][i];
        }
        f(t + C2 * h, ytmp, &mut k[1]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        f(t + C3 * h, ytmp, &mut k[2]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        f(t + C4 * h, ytmp, &mut k[3]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        f(t + C5 * h, ytmp, &mut k[4]);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A61 * k[0][i]
                    + A62 * k[1][i]
                    + A63 * k[2][i]
                    + A64 * k[3][i]
                    + A65 * k[4][i]);
        }
        let t_new = if last { t1 } else { t + h };
        f(t_new, ytmp, &mut k[5]);
        for i in 0..n {
            y1[i] = y[i]
                + h * (A71 * k[0][i]
                    + A73 * k[2][i]
                    + A74 * k[3][i]
                    + A75 * k[4][i]
                    + A76 * k[5][i]);
        }
        f(t_new, y1, &mut k[6]);

        let mut err = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k[0][i]
                    + E3 * k[2][i]
                    + E4 * k[3][i]
                    + E5 * k[4][i]
                    + E6 * k[5][i]
                    + E7 * k[6][i]);
            err += (e / error_scale(opts, y[i], y1[i])).powi(2);
        }
        let err = if n == 0 { 0.0 } else { (err / n as f64).sqrt() };
        if !err.is_finite() {
            // Overflow in a trial stage; retry with a much smaller step.
            h *= FAC_MIN;
            rejected_last = true;
            continue;
        }

        let fac11 = err.powf(expo);
        if err <= 1.0 {
            check_finite(t_new, &k[6])?;
            // Dense output coefficients for the accepted step.
            for i in 0..n {
                let dy = y1[i] - y[i];
                let bspl = h * k[0][i] - dy;
                cont[0][i] = y[i];
                cont[1][i] = dy;
                cont[2][i] = bspl;
                cont[3][i] = dy - h * k[6][i] - bspl;
                cont[4][i] = h
                    * (D1 * k[0][i]
                        + D3 * k[2][i]
                        + D4 * k[3][i]
                        + D5 * k[4][i]
                        + D6 * k[5][i]
                        + D7 * k[6][i]);
            }
            while next_out < emit_at.len() && emit_at[next_out] <= t_new {
                let te = emit_at[next_out];
                if te >= t_new {
                    emit(te, y1);
                } else {
                    let theta = (te - t) / h;
                    let theta1 = 1.0 - theta;
                    for i in 0..n {
                        ytmp[i] = cont[0][i]
                            + theta
                                * (cont[1][i]
                                    + theta1
                                        * (cont[2][i]
                                            + theta * (cont[3][i] + theta1 * cont[4][i])));
                    }
                    emit(te, ytmp);
                }
                next_out += 1;
            }

            y.copy_from_slice(y1);
            k.swap(0, 6);
            t = t_new;
            if last {
                for &te in &emit_at[next_out..] {
                    emit(te, y);
                }
                return Ok(());
            }

            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if rejected_last {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);
            rejected_last = false;
            h = h_new.min(opts.max_step);
        } else {
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            rejected_last = true;
        }
    }
    Err(Error::TooManySteps { t })
}
