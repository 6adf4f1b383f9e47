//! Periodic boxes, their frequency lattices and the discrete Fourier transform.
//!
//! Nodes sit at `x_j = −L/2 + j·L/M` on each axis and wavenumbers at
//! `ξ_k = 2πk/L`, `k ∈ {−M/2, …, M/2−1}`, stored in FFT order. The forward
//! transform approximates `(2π)^{−n/2}∫f(x)e^{−ix·ξ}dx`:
//!
//! ```text
//! f̂_k = (2π)^{−n/2} (L/M)ⁿ Σ_j f_j e^{−iξ_k·x_j},
//! ```
//!
//! so that `Σ_j |f_j|²(L/M)ⁿ = Σ_k |f̂_k|²(2π/L)ⁿ` and `f̂_0` is the moment
//! `(2π)^{−n/2}∫f`.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct Grid {
    dim: usize,
    points: usize,
    length: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    dim: usize,
    #[serde(rename = "M")]
    points: usize,
    #[serde(rename = "L")]
    length: f64,
}

impl TryFrom<RawGrid> for Grid {
    type Error = Error;
    fn try_from(g: RawGrid) -> Result<Self> {
        Grid::new(g.dim, g.points, g.length)
    }
}

impl From<Grid> for RawGrid {
    fn from(g: Grid) -> Self {
        RawGrid {
            dim: g.dim,
            points: g.points,
            length: g.length,
        }
    }
}

impl Grid {
    pub fn new(dim: usize, points: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid(format!("grid dimension must be 1, 2 or 3, got {dim}")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::invalid(format!("points per axis must be a power of two >= 8, got {points}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::invalid(format!("box length must be positive, got {length}")));
        }
        Ok(Grid { dim, points, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn box_length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Spatial cell volume `(L/M)ⁿ`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Frequency cell volume `(2π/L)ⁿ`.
    pub fn frequency_cell(&self) -> f64 {
        (2.0 * PI / self.length).powi(self.dim as i32)
    }

    /// Smallest nonzero frequency magnitude `2π/L`.
    pub fn r_min(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Nyquist magnitude `πM/L`.
    pub fn r_max(&self) -> f64 {
        PI * self.points as f64 / self.length
    }

    /// Axis indices of a flat index, last axis fastest; unused axes are 0.
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            out[a] = rest % self.points;
            rest /= self.points;
        }
        out
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        (0..self.dim).fold(0, |acc, a| acc * self.points + idx[a])
    }

    /// Signed wavenumber index in `{−M/2, …, M/2−1}`.
    pub fn signed_index(&self, k: usize) -> i64 {
        let m = self.points as i64;
        let k = k as i64;
        if k < m / 2 {
            k
        } else {
            k - m
        }
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coordinate(idx[a]);
        }
        x
    }

    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let step = 2.0 * PI / self.length;
        let mut xi = [0.0; 3];
        for a in 0..self.dim {
            xi[a] = step * self.signed_index(idx[a]) as f64;
        }
        xi
    }

    pub fn magnitude(&self, flat: usize) -> f64 {
        self.wavevector(flat).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.magnitude(k)).collect()
    }

    pub fn positions(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|j| self.position(j)).collect()
    }

    /// Flat index of the node `x = 0`.
    pub fn center_index(&self) -> usize {
        self.flat_index([self.points / 2; 3])
    }

    pub fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.len() {
            return Err(Error::GridMismatch(format!(
                "{what} has {len} values, grid has {}",
                self.len()
            )));
        }
        Ok(())
    }

    fn parity(&self, flat: usize) -> f64 {
        let s: usize = self.multi_index(flat).iter().sum();
        if s.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Forward transform of a real field.
    pub fn forward_real(&self, f: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(f.len(), "field")?;
        let data: Vec<Complex64> = f.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        Ok(self.forward(data))
    }

    pub fn forward(&self, mut data: Vec<Complex64>) -> Vec<Complex64> {
        assert_eq!(data.len(), self.len(), "field length does not match grid");
        self.transform(&mut data, false);
        let scale = (2.0 * PI).powf(-0.5 * self.dim as f64) * self.cell_volume();
        for (k, z) in data.iter_mut().enumerate() {
            *z *= scale * self.parity(k);
        }
        data
    }

    pub fn inverse(&self, mut data: Vec<Complex64>) -> Vec<Complex64> {
        assert_eq!(data.len(), self.len(), "spectrum length does not match grid");
        for (k, z) in data.iter_mut().enumerate() {
            *z *= self.parity(k);
        }
        self.transform(&mut data, true);
        let scale = (2.0 * PI).powf(-0.5 * self.dim as f64) * self.frequency_cell();
        for z in data.iter_mut() {
            *z *= scale;
        }
        data
    }

    /// Unnormalized DFT along every axis, in a fixed order.
    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let m = self.points;
        let mut planner = FftPlanner::<f64>::new();
        let fft: Arc<dyn Fft<f64>> = if inverse {
            planner.plan_fft_inverse(m)
        } else {
            planner.plan_fft_forward(m)
        };
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        for axis in 0..self.dim {
            let stride = m.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                for chunk in data.chunks_exact_mut(m) {
                    fft.process_with_scratch(chunk, &mut scratch);
                }
                continue;
            }
            let outer = m.pow(axis as u32);
            for o in 0..outer {
                for inner in 0..stride {
                    let base = o * m * stride + inner;
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + i * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, v) in line.iter().enumerate() {
                        data[base + i * stride] = *v;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(0, 16, 1.0).is_err());
        assert!(Grid::new(4, 16, 1.0).is_err());
        assert!(Grid::new(1, 12, 1.0).is_err());
        assert!(Grid::new(1, 4, 1.0).is_err());
        assert!(Grid::new(1, 16, 0.0).is_err());
        let g = Grid::new(2, 16, 4.0).unwrap();
        assert_eq!(g.len(), 256);
        assert!((g.r_max() - PI * 4.0).abs() < 1e-14);
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        for flat in [0, 7, 8, 63, 64, 511] {
            assert_eq!(g.flat_index(g.multi_index(flat)), flat);
        }
        assert_eq!(g.position(g.center_index()), [0.0, 0.0, 0.0]);
        assert_eq!(g.signed_index(4), -4);
    }

    #[test]
    fn gaussian_transform_matches_continuum() {
        let g = Grid::new(1, 256, 40.0).unwrap();
        let f: Vec<f64> = g.positions().iter().map(|x| (-x[0] * x[0] / 2.0).exp()).collect();
        let fh = g.forward_real(&f).unwrap();
        for k in 0..g.len() {
            let xi = g.wavevector(k)[0];
            let want = (-xi * xi / 2.0).exp();
            assert!((fh[k] - Complex64::new(want, 0.0)).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn round_trip_and_parseval_in_3d() {
        let g = Grid::new(3, 8, 6.0).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let fh = g.forward_real(&f).unwrap();
        let back = g.inverse(fh.clone());
        for (a, b) in f.iter().zip(&back) {
            assert!((b - Complex64::new(*a, 0.0)).norm() < 1e-12);
        }
        let lhs: f64 = f.iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        let rhs: f64 = fh.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.frequency_cell();
        assert!((lhs - rhs).abs() < 1e-12 * lhs);
    }
}
