//! Fixed-size complex linear algebra shared by the spectral modules.

use nalgebra::{Matrix3, Vector3};
pub use num_complex::Complex64;

pub type Mat3 = Matrix3<Complex64>;
pub type Vec3 = Vector3<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Builds a complex matrix from real row-major entries.
pub fn mat_from_real(rows: [[f64; 3]; 3]) -> Mat3 {
    Mat3::from_fn(|i, j| re(rows[i][j]))
}

pub fn diag(d: [Complex64; 3]) -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(d[0], d[1], d[2]))
}

/// Maximum absolute column sum.
pub fn norm1(m: &Mat3) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn off_diagonal_max(m: &Mat3) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Exact 3×3 inverse by cofactors; `None` when the determinant underflows
/// relative to the entry scale.
pub fn inverse(m: &Mat3) -> Option<Mat3> {
    let scale = max_abs(m);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let det = m.determinant();
    if det.norm() <= 1e-300 || det.norm() / scale.powi(3) < 1e-15 {
        return None;
    }
    let cof = |i: usize, j: usize| {
        let (r0, r1) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c0, c1) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    // inverse = adjugate / det, adjugate = cofactor matrix transposed
    Some(Mat3::from_fn(|i, j| cof(j, i) / det))
}

/// 1-norm condition number, infinite when the matrix is singular.
pub fn cond1(m: &Mat3) -> f64 {
    match inverse(m) {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Bilinear cross product (no conjugation): `a·(a×b) = b·(a×b) = 0`.
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    Vec3::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

pub fn vec_norm(v: &Vec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
