//! Time windows in which periodic-grid decay measurements are meaningful.

use crate::error::{Error, Result};
use crate::evolve::Grid;
use crate::model::ModelParams;
use crate::regression::log_space;
use crate::spectrum::raw_eigenvalues;

pub const DEFAULT_WINDOW_SAMPLES: usize = 12;

/// `0.1 / min_j Re λ_j(2π/L)`: beyond this the box's missing frequencies
/// below `2π/L` dominate the continuum decay.
pub fn trustworthy_horizon(grid: &Grid, params: &ModelParams) -> f64 {
    let gap = raw_eigenvalues(grid.r_min(), params).min_re();
    if gap > 0.0 {
        0.1 / gap
    } else {
        f64::INFINITY
    }
}

/// `[10 / min_j Re λ_j(ε), horizon]`.
pub fn default_window(grid: &Grid, params: &ModelParams, eps: f64) -> Result<(f64, f64)> {
    let gap = raw_eigenvalues(eps, params).min_re();
    if !(gap > 0.0) {
        return Err(Error::invalid(format!("no dissipation at r = {eps}")));
    }
    let lo = 10.0 / gap;
    let hi = trustworthy_horizon(grid, params);
    if !(lo < hi) {
        return Err(Error::invalid(format!(
            "empty window: transient scale {lo:e} exceeds horizon {hi:e}; enlarge the box"
        )));
    }
    Ok((lo, hi))
}

/// `DEFAULT_WINDOW_SAMPLES` log-spaced times in `[lo, hi]`.
pub fn window_times(lo: f64, hi: f64) -> Vec<f64> {
    log_space(lo, hi, DEFAULT_WINDOW_SAMPLES)
}

/// First time beyond the horizon, if any.
pub fn horizon_violation(grid: &Grid, params: &ModelParams, times: &[f64]) -> Option<(f64, f64)> {
    let h = trustworthy_horizon(grid, params);
    times.iter().copied().find(|t| *t > h).map(|t| (t, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_grows_with_box() {
        let p = ModelParams::new(2.0, 1).unwrap();
        let small = Grid::new(1, 1024, 100.0).unwrap();
        let big = Grid::new(1, 1024, 1000.0).unwrap();
        assert!(trustworthy_horizon(&big, &p) > 50.0 * trustworthy_horizon(&small, &p));
    }

    #[test]
    fn decay_window_fits_in_large_box() {
        let p = ModelParams::new(0.0, 1).unwrap();
        let g = Grid::new(1, 1 << 14, 2000.0).unwrap();
        let (lo, hi) = default_window(&g, &p, 0.1).unwrap();
        assert!(lo < hi);
        assert!(horizon_violation(&g, &p, &[50.0, 500.0]).is_none());
        let tiny = Grid::new(1, 16, 1.0).unwrap();
        assert!(horizon_violation(&tiny, &ModelParams::new(2.0, 1).unwrap(), &[50.0]).is_some());
        assert_eq!(window_times(1.0, 10.0).len(), DEFAULT_WINDOW_SAMPLES);
    }
}
