//! Norms on grids with reproducible reductions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{Grid, SpectralState};
use crate::linalg::Complex64;

const CHUNK: usize = 4096;

/// Sum with a fixed reduction tree: fixed-size chunks summed in parallel,
/// then combined pairwise. The result does not depend on the thread count.
pub fn deterministic_sum(values: &[f64]) -> f64 {
    let partial: Vec<f64> = values.par_chunks(CHUNK).map(|c| c.iter().sum()).collect();
    pairwise(&partial)
}

/// [`deterministic_sum`] of `f(i)` for `i in 0..len`.
pub fn deterministic_sum_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).map(&f).sum())
        .collect();
    pairwise(&partial)
}

fn pairwise(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise(&v[..n / 2]) + pairwise(&v[n / 2..]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    SobolevDot { s: f64 },
    /// `q = ∞` is written as `f64::INFINITY` (JSON: any value above 1e300).
    Lebesgue { q: f64 },
    WeightedL1 { delta: f64 },
}

impl NormSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NormSpec::SobolevDot { s } if !(s >= 0.0) => Err(Error::invalid(format!("s must be >= 0, got {s}"))),
            NormSpec::Lebesgue { q } if !(q >= 1.0) => Err(Error::invalid(format!("q must be >= 1, got {q}"))),
            NormSpec::WeightedL1 { delta } if !(0.0..=1.0).contains(&delta) => {
                Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")))
            }
            _ => Ok(()),
        }
    }
}

/// `|ξ|^{2s}` with `0^0 = 1`.
#[inline]
pub(crate) fn frequency_weight(r: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        r.powf(2.0 * s)
    }
}

/// `(Σ_k |ξ_k|^{2s} |ŵ_k|² (2π/L)ⁿ)^{1/2}` over all three components.
pub fn sobolev_norm(state: &SpectralState, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("s must be >= 0, got {s}")));
    }
    let g = state.grid;
    let sum = deterministic_sum_by(g.len(), |k| {
        let m = state.fields[0][k].norm_sqr() + state.fields[1][k].norm_sqr() + state.fields[2][k].norm_sqr();
        if m == 0.0 {
            0.0
        } else {
            frequency_weight(g.magnitude(k), s) * m
        }
    });
    Ok((sum * g.frequency_cell()).sqrt())
}

/// Homogeneous Sobolev norm of a single spectral field.
pub fn sobolev_norm_field(grid: &Grid, field: &[Complex64], s: f64) -> Result<f64> {
    grid.check_len(field.len(), "spectral field")?;
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("s must be >= 0, got {s}")));
    }
    let sum = deterministic_sum_by(grid.len(), |k| {
        let m = field[k].norm_sqr();
        if m == 0.0 {
            0.0
        } else {
            frequency_weight(grid.magnitude(k), s) * m
        }
    });
    Ok((sum * grid.frequency_cell()).sqrt())
}

/// Riemann-sum `L^q` norm; `q = ∞` takes the grid maximum.
pub fn lebesgue_norm(grid: &Grid, f: &[f64], q: f64) -> Result<f64> {
    grid.check_len(f.len(), "field")?;
    if !(q >= 1.0) {
        return Err(Error::invalid(format!("q must be >= 1, got {q}")));
    }
    if q.is_infinite() {
        return Ok(f.iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    let sum = deterministic_sum_by(f.len(), |j| f[j].abs().powf(q));
    Ok((sum * grid.cell_volume()).powf(1.0 / q))
}

/// Pointwise Euclidean magnitude of a 3-component field.
pub fn magnitude_field(fields: &[Vec<f64>; 3]) -> Vec<f64> {
    (0..fields[0].len())
        .map(|j| (fields[0][j].powi(2) + fields[1][j].powi(2) + fields[2][j].powi(2)).sqrt())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedL1 {
    pub value: f64,
    /// Share of the unweighted mass within two cells of the box boundary.
    pub boundary_fraction: f64,
}

/// Threshold on [`WeightedL1::boundary_fraction`] above which a warning is logged.
pub const BOUNDARY_MASS_TOL: f64 = 1e-8;

/// `Σ_j (1+|x_j|)^δ |f_j| (L/M)ⁿ` with `|x|` measured from the box center.
pub fn weighted_l1_norm(grid: &Grid, f: &[f64], delta: f64) -> Result<WeightedL1> {
    grid.check_len(f.len(), "field")?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")));
    }
    let m = grid.points_per_axis();
    let dim = grid.dim();
    let weighted = deterministic_sum_by(f.len(), |j| {
        if f[j] == 0.0 {
            return 0.0;
        }
        let x = grid.position(j);
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = if delta == 0.0 { 1.0 } else { (1.0 + r).powf(delta) };
        w * f[j].abs()
    });
    let total = deterministic_sum_by(f.len(), |j| f[j].abs());
    let edge = deterministic_sum_by(f.len(), |j| {
        let idx = grid.multi_index(j);
        if idx[..dim].iter().any(|&i| i < 2 || i + 2 >= m) {
            f[j].abs()
        } else {
            0.0
        }
    });
    let boundary_fraction = if total > 0.0 { edge / total } else { 0.0 };
    if boundary_fraction > BOUNDARY_MASS_TOL {
        log::warn!(
            "weighted L1 norm: {boundary_fraction:e} of the mass lies near the box boundary; the weight is ambiguous"
        );
    }
    Ok(WeightedL1 {
        value: weighted * grid.cell_volume(),
        boundary_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reduction_is_order_fixed() {
        let v: Vec<f64> = (0..10_000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3 + 1e-17 * i as f64).collect();
        let a = deterministic_sum(&v);
        let b = deterministic_sum_by(v.len(), |i| v[i]);
        assert_eq!(a.to_bits(), b.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| deterministic_sum(&v));
        assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn sobolev_examples() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        assert_eq!(sobolev_norm(&SpectralState::zeros(g), 1.0).unwrap(), 0.0);
        let mut s = SpectralState::zeros(g);
        s.fields[1][3] = Complex64::new(0.0, 2.5);
        let n = sobolev_norm(&s, 1.0).unwrap();
        assert!((n - 2.5 * 3.0 * g.frequency_cell().sqrt()).abs() < 1e-14);
        s.fields[0][0] = Complex64::new(4.0, 0.0);
        assert!((sobolev_norm(&s, 1.0).unwrap() - n).abs() < 1e-14);
        let n0 = sobolev_norm(&s, 0.0).unwrap();
        assert!((n0 - ((16.0 + 6.25) * g.frequency_cell()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn parseval_for_gaussian() {
        let g = Grid::new(1, 512, 40.0).unwrap();
        let f: Vec<f64> = g.positions().iter().map(|x| (-(x[0] - 0.3).powi(2)).exp()).collect();
        let st = SpectralState::from_state_fields(g, &[f.clone(), vec![0.0; 512], vec![0.0; 512]]).unwrap();
        let spec = sobolev_norm(&st, 0.0).unwrap();
        let phys = lebesgue_norm(&g, &f, 2.0).unwrap();
        assert!((spec - phys).abs() < 1e-10 * phys);
        assert!((phys - (PI / 2.0).sqrt().sqrt()).abs() < 1e-10);
    }

    #[test]
    fn weighted_examples() {
        let g = Grid::new(1, 256, 40.0).unwrap();
        let f: Vec<f64> = g.positions().iter().map(|x| (-x[0] * x[0] / 2.0).exp()).collect();
        let l1 = weighted_l1_norm(&g, &f, 0.0).unwrap();
        assert!((l1.value - lebesgue_norm(&g, &f, 1.0).unwrap()).abs() < 1e-13);
        assert!(l1.boundary_fraction < 1e-30);
        let mut point = vec![0.0; 256];
        point[g.center_index()] = 1.0 / g.cell_volume();
        assert!((weighted_l1_norm(&g, &point, 1.0).unwrap().value - 1.0).abs() < 1e-14);
        // ∫(1+|x|)e^{−x²/2} = √(2π) + 2; the kink at 0 needs a fine grid
        let fine = Grid::new(1, 1 << 16, 40.0).unwrap();
        let f: Vec<f64> = fine.positions().iter().map(|x| (-x[0] * x[0] / 2.0).exp()).collect();
        let w1 = weighted_l1_norm(&fine, &f, 1.0).unwrap().value;
        assert!((w1 - ((2.0 * PI).sqrt() + 2.0)).abs() < 1e-6);
        assert!(weighted_l1_norm(&g, &f, 1.5).is_err());
    }

    #[test]
    fn boundary_mass_is_reported() {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let f = vec![1.0; 64];
        let w = weighted_l1_norm(&g, &f, 1.0).unwrap();
        assert!((w.boundary_fraction - 4.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_infinity_is_max() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        let f = [0.0, -3.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(lebesgue_norm(&g, &f, f64::INFINITY).unwrap(), 3.0);
        assert!(lebesgue_norm(&g, &f, 0.5).is_err());
    }

    #[test]
    fn norm_spec_ranges() {
        assert!(NormSpec::SobolevDot { s: -1.0 }.validate().is_err());
        assert!(NormSpec::Lebesgue { q: 0.5 }.validate().is_err());
        assert!(NormSpec::WeightedL1 { delta: 2.0 }.validate().is_err());
        assert!(NormSpec::Lebesgue { q: f64::INFINITY }.validate().is_ok());
    }
}
