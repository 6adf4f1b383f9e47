//! Moments of initial data and the first-order moment bound.

use std::f64::consts::PI;

use crate::analysis::norms::{magnitude_field, weighted_l1_norm};
use crate::error::Result;
use crate::evolve::{Grid, SpectralState};
use crate::linalg::Complex64;

/// Calibrated constant of `|Û₀(ξ) − P| ≤ C|ξ|‖U₀‖_{L^{1,1}}` is
/// `(2π)^{−n/2}` times this headroom.
pub const MOMENT_HEADROOM: f64 = 1.1;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentDecomp {
    /// `(2π)^{−n/2}∫U₀ dx` per component.
    pub p: [Complex64; 3],
    /// `‖U₀‖_{L^{1,1}}` of the Euclidean magnitude.
    pub weighted_norm: f64,
    /// Largest `|Û₀(ξ) − P| / (C|ξ|‖U₀‖_{L^{1,1}})` over the sampled `ξ`.
    pub bound_ratio: f64,
    pub samples: usize,
}

impl MomentDecomp {
    pub fn p_norm(&self) -> f64 {
        self.p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn bound_holds(&self) -> bool {
        self.bound_ratio <= 1.0
    }
}

pub fn moment_constant(dim: usize) -> f64 {
    (2.0 * PI).powf(-0.5 * dim as f64)
}

/// Moment and `L^{1,1}` norm of state data, with the moment bound checked at
/// up to 100 lattice frequencies spread over the grid.
pub fn moment(grid: &Grid, fields: &[Vec<f64>; 3]) -> Result<MomentDecomp> {
    let spectrum = SpectralState::from_state_fields(*grid, fields)?;
    let weighted = weighted_l1_norm(grid, &magnitude_field(fields), 1.0)?.value;
    let p = [spectrum.fields[0][0], spectrum.fields[1][0], spectrum.fields[2][0]];
    let c = MOMENT_HEADROOM * moment_constant(grid.dim());
    let n = grid.len();
    let count = 100.min(n - 1);
    let mut ratio = 0.0f64;
    for i in 1..=count {
        let k = i * (n - 1) / count;
        let r = grid.magnitude(k);
        if r == 0.0 {
            continue;
        }
        let diff = (0..3)
            .map(|a| (spectrum.fields[a][k] - p[a]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let bound = c * r * weighted;
        let q = if bound > 0.0 { diff / bound } else if diff > 0.0 { f64::INFINITY } else { 0.0 };
        ratio = ratio.max(q);
    }
    if ratio > 1.0 {
        log::warn!("moment bound exceeded: ratio {ratio}");
    }
    Ok(MomentDecomp {
        p,
        weighted_norm: weighted,
        bound_ratio: ratio,
        samples: count,
    })
}
