//! Closed-form initial-data families sampled on grid nodes.

use std::f64::consts::PI;

use crate::error::Result;
use crate::evolve::{physical_to_state, Grid, PhysicalFields, SpectralState};

use super::config::{DataLevel, DataSpec, Family};

fn center(spec: &DataSpec, dim: usize) -> Vec<f64> {
    if spec.center.is_empty() {
        vec![0.0; dim]
    } else {
        spec.center.clone()
    }
}

fn base_profile(spec: &DataSpec, grid: &Grid, x: &[f64]) -> f64 {
    let c = center(spec, grid.dim());
    let d2: f64 = x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
    match spec.family {
        Family::Gaussian => (-d2 / (2.0 * spec.width * spec.width)).exp(),
        Family::Bump => {
            let rho2 = d2 / (spec.width * spec.width);
            if rho2 < 1.0 {
                (1.0 - 1.0 / (1.0 - rho2)).exp()
            } else {
                0.0
            }
        }
        Family::Cosine => {
            let k = 2.0 * PI / grid.box_length();
            let phase: f64 = x
                .iter()
                .enumerate()
                .map(|(i, xi)| spec.mode.get(i).copied().unwrap_or(1) as f64 * k * xi)
                .sum();
            phase.cos()
        }
    }
}

/// `g(x)` at every node, odd-symmetrized in the last coordinate when requested.
pub fn profile(spec: &DataSpec, grid: &Grid) -> Vec<f64> {
    let n = grid.dim();
    (0..grid.len())
        .map(|j| {
            let x = grid.position(j);
            let g = base_profile(spec, grid, &x[..n]);
            if spec.odd {
                let mut m = x;
                m[n - 1] = -m[n - 1];
                g - base_profile(spec, grid, &m[..n])
            } else {
                g
            }
        })
        .collect()
}

/// `amplitudes[i]·g` for each component.
pub fn scaled_fields(spec: &DataSpec, grid: &Grid) -> [Vec<f64>; 3] {
    let g = profile(spec, grid);
    spec.amplitudes.map(|a| g.iter().map(|v| a * v).collect())
}

/// Physical fields `(u₀, u₁, θ₀)`; only meaningful for physical-level data.
pub fn physical_fields(spec: &DataSpec, grid: &Grid) -> Result<PhysicalFields> {
    let [u, ut, theta] = scaled_fields(spec, grid);
    PhysicalFields::new(*grid, u, ut, theta)
}

/// State fields in physical space, converting physical-level data.
pub fn state_fields(spec: &DataSpec, grid: &Grid) -> Result<[Vec<f64>; 3]> {
    match spec.level {
        DataLevel::State => Ok(scaled_fields(spec, grid)),
        DataLevel::Physical => Ok(initial_state(spec, grid)?.to_state_fields().0),
    }
}

/// Spectral state of the data.
pub fn initial_state(spec: &DataSpec, grid: &Grid) -> Result<SpectralState> {
    match spec.level {
        DataLevel::State => SpectralState::from_state_fields(*grid, &scaled_fields(spec, grid)),
        DataLevel::Physical => physical_to_state(&physical_fields(spec, grid)?),
    }
}
