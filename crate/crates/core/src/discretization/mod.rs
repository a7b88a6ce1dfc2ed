//! Method-of-lines discretizations of the plug-flow reactor
//! `∂_t c = −∂_z N + Q` with a prescribed inlet mass flow.

pub mod fv;
pub mod lagrange;
pub mod quadrature;
pub mod spectral;

pub use fv::{fv_fluxes, fv_outlet_flow, fv_partial_integral, fv_semidiscretize, FvGrid};
pub use lagrange::LagrangeBasis;
pub use quadrature::{chebyshev_nodes_weights, legendre_nodes_weights, Family, Rule};
pub use spectral::{sg_integral, sg_outlet_flow, sg_semidiscretize, DomainMap, SpectralBasis};

use crate::error::Result;
use crate::kinetics::PfrFluxSpec;

/// Finite-volume cell masses or spectral nodal concentrations.
#[derive(Debug, Clone, PartialEq)]
pub enum SpatialDiscretization {
    FiniteVolume(FvGrid),
    Spectral {
        basis: SpectralBasis,
        map: DomainMap,
        area: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    FiniteVolume,
    SpectralGalerkin,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::FiniteVolume => "fv",
            Scheme::SpectralGalerkin => "sg",
        }
    }

    pub fn default_resolution(self) -> usize {
        match self {
            Scheme::FiniteVolume => 100,
            Scheme::SpectralGalerkin => 32,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fv" | "finite_volume" => Ok(Scheme::FiniteVolume),
            "sg" | "spectral" | "spectral_galerkin" => Ok(Scheme::SpectralGalerkin),
            other => Err(crate::error::Error::invalid(
                "scheme",
                format!("expected `fv` or `sg`, got `{other}`"),
            )),
        }
    }
}

impl SpatialDiscretization {
    /// Uniform finite-volume grid with `resolution` cells, or a Legendre
    /// Gauss–Lobatto basis of order `resolution`.
    pub fn build(scheme: Scheme, z0: f64, zf: f64, area: f64, resolution: usize) -> Result<Self> {
        match scheme {
            Scheme::FiniteVolume => Ok(Self::FiniteVolume(FvGrid::uniform(
                z0, zf, resolution, area,
            )?)),
            Scheme::SpectralGalerkin => Ok(Self::Spectral {
                basis: SpectralBasis::legendre_lobatto(resolution)?,
                map: DomainMap::new(z0, zf)?,
                area,
            }),
        }
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            Self::FiniteVolume(_) => Scheme::FiniteVolume,
            Self::Spectral { .. } => Scheme::SpectralGalerkin,
        }
    }

    pub fn n_dofs(&self) -> usize {
        match self {
            Self::FiniteVolume(g) => g.cells(),
            Self::Spectral { basis, .. } => basis.len(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Self::FiniteVolume(g) => g.area,
            Self::Spectral { area, .. } => *area,
        }
    }

    /// Positions of the unknowns: cell centres or mapped nodes.
    pub fn positions(&self) -> Vec<f64> {
        match self {
            Self::FiniteVolume(g) => g.centers.clone(),
            Self::Spectral { basis, map, .. } => {
                basis.nodes.iter().map(|&x| map.to_physical(x)).collect()
            }
        }
    }

    /// Local concentration at each unknown.
    pub fn concentrations(&self, dofs: &[f64]) -> Vec<f64> {
        match self {
            Self::FiniteVolume(g) => g.concentrations(dofs),
            Self::Spectral { .. } => dofs.to_vec(),
        }
    }

    /// Time derivative of the unknowns given the inlet mass flow and a
    /// concentration-dependent source `Q(c)`.
    pub fn rhs(
        &self,
        spec: &PfrFluxSpec,
        inlet_flow: f64,
        source: impl Fn(f64) -> f64,
        dofs: &[f64],
        out: &mut [f64],
    ) {
        let q: Vec<f64> = self.concentrations(dofs).into_iter().map(source).collect();
        match self {
            Self::FiniteVolume(g) => fv_semidiscretize(g, spec, inlet_flow, &q, dofs, out),
            Self::Spectral { basis, map, area } => {
                sg_semidiscretize(basis, map, spec, *area, inlet_flow, &q, dofs, out)
            }
        }
    }

    /// `A ∫ c dz` over the whole domain.
    pub fn total(&self, dofs: &[f64]) -> f64 {
        match self {
            Self::FiniteVolume(_) => dofs.iter().sum(),
            Self::Spectral { basis, map, area } => {
                sg_integral(basis, map, *area, dofs, None).expect("full-domain integral")
            }
        }
    }

    /// `A ∫_{z_0}^{z_d} c dz`.
    pub fn partial(&self, dofs: &[f64], z_d: f64) -> Result<f64> {
        match self {
            Self::FiniteVolume(g) => fv_partial_integral(g, dofs, z_d),
            Self::Spectral { basis, map, area } => {
                let xi = map.to_reference(z_d);
                if xi <= -1.0 && xi >= -1.0 - 1e-15 {
                    return Ok(0.0);
                }
                sg_integral(basis, map, *area, dofs, Some((-1.0, xi)))
            }
        }
    }

    pub fn outlet_flow(&self, spec: &PfrFluxSpec, dofs: &[f64]) -> f64 {
        match self {
            Self::FiniteVolume(g) => fv_outlet_flow(g, spec, dofs),
            Self::Spectral { basis, area, .. } => sg_outlet_flow(basis, spec, *area, dofs),
        }
    }
}
