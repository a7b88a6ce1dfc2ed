//! Spectral Galerkin semidiscretization on `[−1, 1]` with an affine map to
//! the physical domain.
//!
//! The unknowns are nodal concentrations `ĉ_n`. With quadrature weights
//! `w_n` and the transformed flux `N̄ = v̄ ĉ − D̄ ∂_ξ ĉ`,
//!
//! ```text
//! dĉ_n/dt = −(1/w_n)[N̄ ℓ_n]_{−1}^{1} + (1/w_n) Σ_l N̄_l ℓ_n'(ξ_l) w_l + Q_n
//! ```
//!
//! where the inlet flux is prescribed and the outlet flux is purely advective.

use super::lagrange::LagrangeBasis;
use super::quadrature::{gauss_legendre_on, nodes_weights, Family, Rule};
use crate::error::{Error, Result};
use crate::kinetics::PfrFluxSpec;

/// Affine map `z(ξ) = z_0 + (ξ + 1)(z_f − z_0)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainMap {
    pub z0: f64,
    pub zf: f64,
}

impl DomainMap {
    pub fn new(z0: f64, zf: f64) -> Result<Self> {
        if !(zf > z0) {
            return Err(Error::invalid("z_f", "domain end must exceed its start"));
        }
        Ok(Self { z0, zf })
    }

    /// `dz/dξ`.
    pub fn jacobian(&self) -> f64 {
        0.5 * (self.zf - self.z0)
    }

    pub fn to_physical(&self, xi: f64) -> f64 {
        self.z0 + (xi + 1.0) * self.jacobian()
    }

    pub fn to_reference(&self, z: f64) -> f64 {
        2.0 * (z - self.z0) / (self.zf - self.z0) - 1.0
    }

    /// `v̄ = v / (dz/dξ)`.
    pub fn velocity(&self, v: f64) -> f64 {
        v / self.jacobian()
    }

    /// `D̄ = D / (dz/dξ)²`.
    pub fn diffusion(&self, d: f64) -> f64 {
        d / self.jacobian().powi(2)
    }

    /// `F̄ = F / (dz/dξ)`.
    pub fn flow(&self, f: f64) -> f64 {
        f / self.jacobian()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    pub family: Family,
    pub rule: Rule,
    pub order: usize,
    pub nodes: Vec<f64>,
    /// Quadrature weights of the rule (for its own weight function).
    pub weights: Vec<f64>,
    /// `∫_{−1}^{1} ℓ_n dξ`, the weights used in the Galerkin equations.
    /// Equal to `weights` for Legendre rules.
    pub galerkin_weights: Vec<f64>,
    pub lagrange: LagrangeBasis,
    /// `ℓ_n(−1)` and `ℓ_n(1)`.
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl SpectralBasis {
    pub fn new(family: Family, rule: Rule, order: usize) -> Result<Self> {
        let (nodes, weights) = nodes_weights(family, order, rule)?;
        let lagrange = LagrangeBasis::new(&nodes)?;
        let galerkin_weights = match family {
            Family::Legendre => weights.clone(),
            Family::Chebyshev => {
                let (zq, wq) = gauss_legendre_on(order / 2 + 1, -1.0, 1.0)?;
                let mut g = vec![0.0; nodes.len()];
                for (z, w) in zq.iter().zip(&wq) {
                    for (gi, l) in g.iter_mut().zip(lagrange.eval(*z)) {
                        *gi += w * l;
                    }
                }
                g
            }
        };
        let left = lagrange.eval(-1.0);
        let right = lagrange.eval(1.0);
        Ok(Self {
            family,
            rule,
            order,
            nodes,
            weights,
            galerkin_weights,
            lagrange,
            left,
            right,
        })
    }

    /// Legendre Gauss–Lobatto of order `order`.
    pub fn legendre_lobatto(order: usize) -> Result<Self> {
        Self::new(Family::Legendre, Rule::GaussLobatto, order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Interpolant value at `ξ ∈ [−1, 1]`.
    pub fn value_at(&self, coeffs: &[f64], xi: f64) -> f64 {
        self.lagrange.interpolate(coeffs, xi)
    }
}

/// Right-hand side for the nodal concentrations.
///
/// `area` is the cross-section, `inlet_flow` the mass flow entering at
/// `z_0` and `source[n] = Q_n`.
#[allow(clippy::too_many_arguments)]
pub fn sg_semidiscretize(
    basis: &SpectralBasis,
    map: &DomainMap,
    spec: &PfrFluxSpec,
    area: f64,
    inlet_flow: f64,
    source: &[f64],
    coeffs: &[f64],
    dc: &mut [f64],
) {
    let n = basis.len();
    let v = map.velocity(spec.v);
    let d = map.diffusion(spec.d_c);
    let w = &basis.galerkin_weights;
    let grad = basis.lagrange.differentiate(coeffs);
    let flux: Vec<f64> = (0..n).map(|l| v * coeffs[l] - d * grad[l]).collect();
    let inlet = map.flow(inlet_flow) / area;
    let c_out: f64 = basis.right.iter().zip(coeffs).map(|(l, c)| l * c).sum();
    let outlet = v * c_out;
    for k in 0..n {
        let boundary = outlet * basis.right[k] - inlet * basis.left[k];
        let volume: f64 = (0..n)
            .map(|l| flux[l] * basis.lagrange.d1[(l, k)] * w[l])
            .sum();
        dc[k] = (volume - boundary) / w[k] + source[k];
    }
}

/// Mass flow leaving at `z_f`.
pub fn sg_outlet_flow(basis: &SpectralBasis, spec: &PfrFluxSpec, area: f64, coeffs: &[f64]) -> f64 {
    let c_out: f64 = basis.right.iter().zip(coeffs).map(|(l, c)| l * c).sum();
    area * spec.v * c_out
}

/// Fewest Gauss points for sub-interval integrals.
pub const SUBINTERVAL_POINTS: usize = 16;

/// `A ∫ c dz` over the whole domain, or over `[ξ_a, ξ_b]` when given.
pub fn sg_integral(
    basis: &SpectralBasis,
    map: &DomainMap,
    area: f64,
    coeffs: &[f64],
    sub_interval: Option<(f64, f64)>,
) -> Result<f64> {
    let jac = map.jacobian();
    match sub_interval {
        None => Ok(area
            * jac
            * basis
                .galerkin_weights
                .iter()
                .zip(coeffs)
                .map(|(w, c)| w * c)
                .sum::<f64>()),
        Some((a, b)) => {
            for x in [a, b] {
                if !(-1.0..=1.0).contains(&x) {
                    return Err(Error::OutsideDomain {
                        z: x,
                        lo: -1.0,
                        hi: 1.0,
                    });
                }
            }
            if !(b > a) {
                return Err(Error::EmptyInterval(a, b));
            }
            // exact for the degree-M interpolant
            let points = SUBINTERVAL_POINTS.max(basis.order / 2 + 1);
            let (z, w) = gauss_legendre_on(points, a, b)?;
            let s: f64 = z
                .iter()
                .zip(&w)
                .map(|(z, w)| w * basis.value_at(coeffs, *z))
                .sum();
            Ok(area * jac * s)
        }
    }
}
