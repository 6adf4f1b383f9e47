//! Per-frequency solution operators `exp(−t·A(r;σ))`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::linalg::{norm1, re, Complex64, Mat3};
use crate::model::{symbol_matrix_unchecked, ModelParams, StateVector, SymbolMatrix};
use crate::spectrum::{eigen_decomp_with_tol, DEFAULT_DEGENERACY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorMethod {
    /// Eigen route when well separated and conditioned, series otherwise.
    #[default]
    Auto,
    Eigen,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PropagatorOptions {
    pub method: PropagatorMethod,
    pub degeneracy_tol: f64,
    /// Largest eigenvector condition number accepted by the eigen route.
    pub max_condition: f64,
    /// Scaling target: the series acts on `X/2^s` with `‖X/2^s‖₁ ≤ squaring_norm`.
    pub squaring_norm: f64,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        PropagatorOptions {
            method: PropagatorMethod::Auto,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
            max_condition: 1e8,
            squaring_norm: 0.5,
        }
    }
}

impl PropagatorOptions {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.degeneracy_tol > 0.0) {
            return Err(crate::Error::invalid("degeneracy_tol must be positive"));
        }
        if !(self.squaring_norm > 0.0 && self.squaring_norm <= 1.0) {
            return Err(crate::Error::invalid("squaring_norm must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Which route produced a propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Identity,
    Eigen,
    Series,
}

/// `exp(−t·A(r;σ))` as a real matrix, plus the route taken.
pub fn propagator_with_route(
    r: f64,
    params: &ModelParams,
    t: f64,
    opts: &PropagatorOptions,
) -> (Matrix3<f64>, Route) {
    if t == 0.0 || (r == 0.0 && params.sigma() > 0.0) {
        return (Matrix3::identity(), Route::Identity);
    }
    if opts.method != PropagatorMethod::Series {
        let d = eigen_decomp_with_tol(r, params, opts.degeneracy_tol);
        let usable = !d.degenerate && d.cond < opts.max_condition;
        if usable || (opts.method == PropagatorMethod::Eigen && !d.degenerate) {
            let e = Mat3::from_diagonal(&nalgebra::Vector3::from_iterator(
                d.lambdas.roots.iter().map(|l| (-*l * t).exp()),
            ));
            let m = d.v * e * d.v_inv;
            // the symbol is real, so is its exponential
            return (m.map(|z| z.re), Route::Eigen);
        }
    }
    let a = symbol_matrix_unchecked(r, params).matrix().map(|z| z.re);
    (expm_pade(&(a * -t), opts.squaring_norm), Route::Series)
}

pub fn propagator_matrix(r: f64, params: &ModelParams, t: f64, opts: &PropagatorOptions) -> Matrix3<f64> {
    propagator_with_route(r, params, t, opts).0
}

/// `exp(−t·A(r;σ))·w0`; exact identity at `t = 0`.
pub fn propagate_mode(
    w0: &StateVector,
    r: f64,
    params: &ModelParams,
    t: f64,
    opts: &PropagatorOptions,
) -> StateVector {
    if t == 0.0 {
        return *w0;
    }
    let p = propagator_matrix(r, params, t, opts);
    apply_real(&p, w0)
}

pub(crate) fn apply_real(p: &Matrix3<f64>, w: &StateVector) -> StateVector {
    let v = [w.w1, w.w2, w.w3];
    let row = |i: usize| -> Complex64 { (0..3).map(|j| v[j] * p[(i, j)]).sum() };
    StateVector::new(row(0), row(1), row(2))
}

const PADE6: [f64; 7] = {
    // c_k = c_{k−1}·(q−k+1)/(k(2q−k+1)), q = 6
    let mut c = [1.0; 7];
    let q = 6.0;
    let mut k = 1;
    while k < 7 {
        let kf = k as f64;
        c[k] = c[k - 1] * (q - kf + 1.0) / (kf * (2.0 * q - kf + 1.0));
        k += 1;
    }
    c
};

fn norm1_real(m: &Matrix3<f64>) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Diagonal Padé [6/6] approximant with scaling and squaring.
pub fn expm_pade(x: &Matrix3<f64>, target_norm: f64) -> Matrix3<f64> {
    let nrm = norm1_real(x);
    if nrm == 0.0 {
        return Matrix3::identity();
    }
    let s = if nrm > target_norm {
        (nrm / target_norm).log2().ceil() as i32
    } else {
        0
    };
    let xs = x * 0.5f64.powi(s);
    let id = Matrix3::<f64>::identity();
    let mut num = id * PADE6[0];
    let mut den = id * PADE6[0];
    let mut pow = id;
    for (k, ck) in PADE6.iter().enumerate().skip(1) {
        pow *= xs;
        num += pow * *ck;
        den += pow * (if k % 2 == 0 { *ck } else { -*ck });
    }
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is nonsingular for ‖X‖₁ ≤ 1");
    for _ in 0..s {
        r = r * r;
    }
    r
}

/// `exp(−t·M)` by a fixed 30-term Taylor series with scaling and squaring.
///
/// Independent of eigen-decompositions; meant as a reference in tests.
pub fn expm_oracle(m: &SymbolMatrix, t: f64) -> Mat3 {
    let x = m.matrix() * re(-t);
    let nrm = norm1(&x);
    let s = if nrm > 0.125 {
        (nrm / 0.125).log2().ceil() as i32
    } else {
        0
    };
    let xs = x * re(0.5f64.powi(s));
    let mut term = Mat3::identity();
    let mut sum = Mat3::identity();
    for k in 1..=30 {
        term = term * xs * re(1.0 / k as f64);
        sum += term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}
