//! Lagrange polynomials through a node set, in barycentric form.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    pub nodes: Vec<f64>,
    /// `w̃_m = Π_{l≠m} 1/(z_m − z_l)`.
    pub bary: Vec<f64>,
    /// `d1[(l, m)] = ℓ_m'(z_l)`.
    pub d1: DMatrix<f64>,
    /// `d2[(l, m)] = ℓ_m''(z_l)`.
    pub d2: DMatrix<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        let n = nodes.len();
        for i in 0..n {
            for j in i + 1..n {
                if nodes[i] == nodes[j] {
                    return Err(Error::DuplicateNodes(i, j));
                }
            }
        }
        let bary: Vec<f64> = (0..n)
            .map(|m| {
                (0..n)
                    .filter(|&l| l != m)
                    .map(|l| 1.0 / (nodes[m] - nodes[l]))
                    .product()
            })
            .collect();

        let mut d1 = DMatrix::zeros(n, n);
        for l in 0..n {
            let mut sum = 0.0;
            for m in 0..n {
                if m != l {
                    let v = bary[m] / (bary[l] * (nodes[l] - nodes[m]));
                    d1[(l, m)] = v;
                    sum += v;
                }
            }
            d1[(l, l)] = -sum;
        }

        let mut d2 = DMatrix::zeros(n, n);
        for l in 0..n {
            let mut sum = 0.0;
            for m in 0..n {
                if m != l {
                    let v = 2.0 * d1[(l, m)] * (d1[(l, l)] - 1.0 / (nodes[l] - nodes[m]));
                    d2[(l, m)] = v;
                    sum += v;
                }
            }
            d2[(l, l)] = -sum;
        }

        Ok(Self {
            nodes: nodes.to_vec(),
            bary,
            d1,
            d2,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `ℓ_m(z)` for every `m`.
    pub fn eval(&self, z: f64) -> Vec<f64> {
        if let Some(k) = self.nodes.iter().position(|&zk| zk == z) {
            let mut e = vec![0.0; self.len()];
            e[k] = 1.0;
            return e;
        }
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.bary)
            .map(|(zm, wm)| wm / (z - zm))
            .collect();
        let s: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / s).collect()
    }

    /// Value of the interpolant with nodal values `values` at `z`.
    pub fn interpolate(&self, values: &[f64], z: f64) -> f64 {
        self.eval(z).iter().zip(values).map(|(l, v)| l * v).sum()
    }

    /// Nodal values of the first derivative of the interpolant.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|l| (0..self.len()).map(|m| self.d1[(l, m)] * values[m]).sum())
            .collect()
    }

    pub fn differentiate2(&self, values: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|l| (0..self.len()).map(|m| self.d2[(l, m)] * values[m]).sum())
            .collect()
    }
}
