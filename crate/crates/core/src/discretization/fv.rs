//! Finite-volume semidiscretization of `∂_t c = −∂_z N + Q` on a cylinder.
//!
//! The unknowns are the cell masses `m_i`. Advection is upwinded, diffusion
//! uses a first-order difference between cell centres, the inlet flux is
//! prescribed and the outlet carries no diffusive flux.

use crate::error::{Error, Result};
use crate::kinetics::PfrFluxSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct FvGrid {
    pub edges: Vec<f64>,
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
    /// Cross-sectional area.
    pub area: f64,
}

impl FvGrid {
    pub fn new(edges: Vec<f64>, area: f64) -> Result<Self> {
        if edges.len() < 3 {
            return Err(Error::invalid("cells", "need at least two cells"));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "edges",
                "cell edges must be strictly ascending",
            ));
        }
        if !(area > 0.0) {
            return Err(Error::invalid("area", "cross-section must be positive"));
        }
        let centers = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let widths = edges.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            edges,
            centers,
            widths,
            area,
        })
    }

    pub fn uniform(z0: f64, zf: f64, cells: usize, area: f64) -> Result<Self> {
        if !(zf > z0) {
            return Err(Error::invalid("z_f", "domain end must exceed its start"));
        }
        let h = (zf - z0) / cells as f64;
        let mut edges: Vec<f64> = (0..=cells).map(|i| z0 + i as f64 * h).collect();
        if let Some(last) = edges.last_mut() {
            *last = zf;
        }
        Self::new(edges, area)
    }

    pub fn cells(&self) -> usize {
        self.widths.len()
    }

    pub fn start(&self) -> f64 {
        self.edges[0]
    }

    pub fn end(&self) -> f64 {
        self.edges[self.cells()]
    }

    pub fn volume(&self, i: usize) -> f64 {
        self.area * self.widths[i]
    }

    pub fn concentrations(&self, masses: &[f64]) -> Vec<f64> {
        masses
            .iter()
            .enumerate()
            .map(|(i, m)| m / self.volume(i))
            .collect()
    }

    /// Cell masses of a concentration profile given by its cell averages.
    pub fn masses(&self, concentrations: &[f64]) -> Vec<f64> {
        concentrations
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.volume(i))
            .collect()
    }
}

/// Face fluxes `N_0..N_M`.
pub fn fv_fluxes(grid: &FvGrid, spec: &PfrFluxSpec, inlet_flow: f64, masses: &[f64]) -> Vec<f64> {
    let m = grid.cells();
    let c = grid.concentrations(masses);
    let mut n = Vec::with_capacity(m + 1);
    n.push(inlet_flow / grid.area);
    for i in 1..m {
        let dzc = grid.centers[i] - grid.centers[i - 1];
        n.push(spec.v * c[i - 1] - spec.d_c * (c[i] - c[i - 1]) / dzc);
    }
    n.push(spec.v * c[m - 1]);
    n
}

/// `ṁ_i = −A(N_{i+1} − N_i) + A Δz_i Q_i`, with `source[i] = Q_i`.
pub fn fv_semidiscretize(
    grid: &FvGrid,
    spec: &PfrFluxSpec,
    inlet_flow: f64,
    source: &[f64],
    masses: &[f64],
    dm: &mut [f64],
) {
    let n = fv_fluxes(grid, spec, inlet_flow, masses);
    for i in 0..grid.cells() {
        dm[i] = -grid.area * (n[i + 1] - n[i]) + grid.volume(i) * source[i];
    }
}

/// Mass flow leaving through the outlet, `A·N_M`.
pub fn fv_outlet_flow(grid: &FvGrid, spec: &PfrFluxSpec, masses: &[f64]) -> f64 {
    let last = grid.cells() - 1;
    grid.area * spec.v * masses[last] / grid.volume(last)
}

/// Mass between the inlet and `z_d`, assuming an even distribution inside
/// the cell that contains `z_d`.
pub fn fv_partial_integral(grid: &FvGrid, masses: &[f64], z_d: f64) -> Result<f64> {
    let (lo, hi) = (grid.start(), grid.end());
    if !(z_d >= lo && z_d <= hi) {
        return Err(Error::OutsideDomain { z: z_d, lo, hi });
    }
    if z_d == hi {
        return Ok(masses.iter().sum());
    }
    let k = grid.edges.partition_point(|&e| e <= z_d) - 1;
    let frac = (z_d - grid.edges[k]) / grid.widths[k];
    Ok(masses[..k].iter().sum::<f64>() + frac * masses[k])
}
