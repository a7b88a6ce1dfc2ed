//! Legendre and Chebyshev Gauss / Gauss–Lobatto rules on `[−1, 1]`.
//!
//! `M` is the polynomial order: every rule has `M + 1` nodes. Nodes are
//! returned in ascending order and are exactly antisymmetric about 0.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Legendre,
    Chebyshev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Gauss,
    GaussLobatto,
}

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// `(L_n(z), L_{n−1}(z))` by the three-term recursion (`L_{−1} := 0`).
pub fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * z * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `L_n'(z)`.
pub fn legendre_derivative(n: usize, z: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    if (1.0 - z.abs()) < 1e-15 {
        let sign = if z > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        return sign * 0.5 * nf * (nf + 1.0);
    }
    let (l, lm1) = legendre(n, z);
    nf * (lm1 - z * l) / (1.0 - z * z)
}

fn newton(mut z: f64, degree: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<f64> {
    for _ in 0..NEWTON_MAX_ITER {
        let (v, dv) = f(z);
        let dz = v / dv;
        z -= dz;
        if dz.abs() <= NEWTON_TOL {
            return Ok(z);
        }
    }
    Err(Error::RootFinding { degree })
}

/// Fill an ascending, antisymmetric node vector of length `n` from its
/// negative half.
fn mirror(n: usize, negative_half: impl Fn(usize) -> Result<f64>) -> Result<Vec<f64>> {
    let mut z = vec![0.0; n];
    for j in 0..n / 2 {
        let v = negative_half(j)?;
        z[j] = v;
        z[n - 1 - j] = -v;
    }
    Ok(z)
}

pub fn legendre_nodes_weights(m: usize, rule: Rule) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::invalid("M", "order must be at least 1"));
    }
    let n = m + 1;
    match rule {
        Rule::Gauss => {
            let nodes = mirror(n, |j| {
                let guess = -((4 * j + 3) as f64 * PI / (4 * n + 2) as f64).cos();
                newton(guess, n, |z| (legendre(n, z).0, legendre_derivative(n, z)))
            })?;
            let weights = nodes
                .iter()
                .map(|&z| {
                    let d = legendre_derivative(n, z);
                    2.0 / ((1.0 - z * z) * d * d)
                })
                .collect();
            Ok((nodes, weights))
        }
        Rule::GaussLobatto => {
            let mf = m as f64;
            let nodes = mirror(n, |j| {
                if j == 0 {
                    return Ok(-1.0);
                }
                let guess = -(j as f64 * PI / mf).cos();
                newton(guess, m, |z| {
                    let d1 = legendre_derivative(m, z);
                    let l = legendre(m, z).0;
                    let d2 = (2.0 * z * d1 - mf * (mf + 1.0) * l) / (1.0 - z * z);
                    (d1, d2)
                })
            })?;
            let weights = nodes
                .iter()
                .map(|&z| {
                    let l = legendre(m, z).0;
                    2.0 / (mf * (mf + 1.0) * l * l)
                })
                .collect();
            Ok((nodes, weights))
        }
    }
}

/// Chebyshev rules for the weight `1/√(1 − z²)`.
pub fn chebyshev_nodes_weights(m: usize, rule: Rule) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::invalid("M", "order must be at least 1"));
    }
    let n = m + 1;
    let mf = m as f64;
    // The positive half is `z_l` for l = 0, 1, ... as printed; the rest mirrors it.
    let nodes = match rule {
        Rule::Gauss => mirror(n, |j| {
            Ok(-((2 * j + 1) as f64 * PI / (2.0 * mf + 2.0)).cos())
        })?,
        Rule::GaussLobatto => mirror(n, |j| {
            Ok(if j == 0 {
                -1.0
            } else {
                -(j as f64 * PI / mf).cos()
            })
        })?,
    };
    let weights = match rule {
        Rule::Gauss => vec![PI / (mf + 1.0); n],
        Rule::GaussLobatto => (0..n)
            .map(|l| {
                if l == 0 || l == m {
                    PI / (2.0 * mf)
                } else {
                    PI / mf
                }
            })
            .collect(),
    };
    Ok((nodes, weights))
}

pub fn nodes_weights(family: Family, m: usize, rule: Rule) -> Result<(Vec<f64>, Vec<f64>)> {
    match family {
        Family::Legendre => legendre_nodes_weights(m, rule),
        Family::Chebyshev => chebyshev_nodes_weights(m, rule),
    }
}

/// `n`-point Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (z, w) = legendre_nodes_weights(n.max(1) - 1, Rule::Gauss).or_else(|e| {
        if n == 1 {
            Ok((vec![0.0], vec![2.0]))
        } else {
            Err(e)
        }
    })?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok((
        z.iter().map(|z| mid + half * z).collect(),
        w.iter().map(|w| w * half).collect(),
    ))
}
