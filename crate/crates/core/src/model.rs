//! System parameters, Fourier symbols and the first-order change of variables.
//!
//! After a partial Fourier transform the plate system becomes, per frequency
//! magnitude `r = |ξ|`,
//!
//! ```text
//! û_tt + r⁴û − r²θ̂ + r^{2σ}û_t = 0,
//! θ̂_t + r²θ̂ + r²û_t = 0,
//! ```
//!
//! and with `w = (û_t + r²û, û_t − r²û, θ̂)` it reads `w_t + A(r;σ) w = 0`.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{mat_from_real, Complex64, Mat3, Vec3};

/// Damping exponent `σ ∈ [0, 2]` and space dimension `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    sigma: f64,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    sigma: f64,
    dim: usize,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.sigma, raw.dim)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            sigma: p.sigma,
            dim: p.dim,
        }
    }
}

impl ModelParams {
    pub fn new(sigma: f64, dim: usize) -> Result<Self> {
        if !(0.0..=2.0).contains(&sigma) || sigma.is_nan() {
            return Err(Error::SigmaOutOfRange(sigma));
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(ModelParams { sigma, dim })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `r^{2σ}` with the convention `r⁰ = 1`, also at `r = 0`.
    pub fn damping_weight(&self, r: f64) -> f64 {
        if self.sigma == 0.0 {
            1.0
        } else {
            r.powf(2.0 * self.sigma)
        }
    }

    pub fn is_critical(&self) -> bool {
        self.sigma == 1.0
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={}, n={}", self.sigma, self.dim)
    }
}

/// A dense 3×3 Fourier symbol (entries carry units of inverse time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolMatrix(Mat3);

impl SymbolMatrix {
    pub fn from_matrix(m: Mat3) -> Self {
        SymbolMatrix(m)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat3 {
        self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scaled(&self, factor: f64) -> SymbolMatrix {
        SymbolMatrix(self.0 * Complex64::new(factor, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }
}

impl Index<(usize, usize)> for SymbolMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl std::ops::Add for SymbolMatrix {
    type Output = SymbolMatrix;
    fn add(self, rhs: SymbolMatrix) -> SymbolMatrix {
        SymbolMatrix(self.0 + rhs.0)
    }
}

/// Returns `(A₀, A₁)`.
pub fn coefficient_matrices() -> (SymbolMatrix, SymbolMatrix) {
    let a0 = mat_from_real([[0.0, -1.0, -1.0], [1.0, 0.0, -1.0], [0.5, 0.5, 1.0]]);
    let a1 = mat_from_real([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 0.0]]);
    (SymbolMatrix(a0), SymbolMatrix(a1))
}

/// `A(r;σ) = r²A₀ + r^{2σ}A₁`.
pub fn symbol_matrix(r: f64, params: &ModelParams) -> Result<SymbolMatrix> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("frequency magnitude must be >= 0, got {r}")));
    }
    Ok(symbol_matrix_unchecked(r, params))
}

pub(crate) fn symbol_matrix_unchecked(r: f64, params: &ModelParams) -> SymbolMatrix {
    let (a0, a1) = coefficient_matrices();
    a0.scaled(r * r) + a1.scaled(params.damping_weight(r))
}

/// Fourier amplitudes of `(u_t + |D|²u, u_t − |D|²u, θ)` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector {
    pub w1: Complex64,
    pub w2: Complex64,
    pub w3: Complex64,
}

impl StateVector {
    pub fn new(w1: Complex64, w2: Complex64, w3: Complex64) -> Self {
        StateVector { w1, w2, w3 }
    }

    pub fn from_real(w1: f64, w2: f64, w3: f64) -> Self {
        StateVector::new(w1.into(), w2.into(), w3.into())
    }

    pub fn to_vec3(self) -> Vec3 {
        Vec3::new(self.w1, self.w2, self.w3)
    }

    pub fn from_vec3(v: &Vec3) -> Self {
        StateVector::new(v[0], v[1], v[2])
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.w1, self.w2, self.w3]
    }

    pub fn norm(&self) -> f64 {
        (self.w1.norm_sqr() + self.w2.norm_sqr() + self.w3.norm_sqr()).sqrt()
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        StateVector::new(self.w1 - other.w1, self.w2 - other.w2, self.w3 - other.w3).norm()
    }
}

/// Fourier amplitudes `(û, û_t, θ̂)` of the physical unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhysicalTriple {
    pub u_hat: Complex64,
    pub ut_hat: Complex64,
    pub theta_hat: Complex64,
}

impl PhysicalTriple {
    pub fn new(u_hat: Complex64, ut_hat: Complex64, theta_hat: Complex64) -> Self {
        PhysicalTriple {
            u_hat,
            ut_hat,
            theta_hat,
        }
    }

    pub fn from_real(u: f64, ut: f64, theta: f64) -> Self {
        PhysicalTriple::new(u.into(), ut.into(), theta.into())
    }

    pub fn is_finite(&self) -> bool {
        [self.u_hat, self.ut_hat, self.theta_hat]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

pub fn state_from_physical(p: &PhysicalTriple, r: f64) -> StateVector {
    let r2u = p.u_hat * (r * r);
    StateVector::new(p.ut_hat + r2u, p.ut_hat - r2u, p.theta_hat)
}

pub fn physical_from_state(w: &StateVector, r: f64) -> Result<PhysicalTriple> {
    if r == 0.0 {
        return Err(Error::ZeroFrequency("u is not recoverable from w at xi = 0"));
    }
    if !(r > 0.0) {
        return Err(Error::invalid(format!("frequency magnitude must be > 0, got {r}")));
    }
    Ok(PhysicalTriple::new(
        (w.w1 - w.w2) / (2.0 * r * r),
        (w.w1 + w.w2) * 0.5,
        w.w3,
    ))
}
