//! Zone cutoffs, the parabolic reference systems and diffusion residuals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::fit::{decay_fit, DecayFit};
use crate::analysis::norms::{deterministic_sum, frequency_weight};
use crate::asymptotics::{constant_eigenvectors, structural_corrections, structural_t0};
use crate::error::{Error, Result};
use crate::evolve::{propagator_matrix, PropagatorOptions, SpectralState};
use crate::linalg::{diag, inverse, re, Complex64, Mat3};
use crate::model::{ModelParams, StateVector};
use crate::spectrum::{y_constants, YKind};

fn glue(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
fn smooth_step(x: f64) -> f64 {
    let a = glue(x);
    let b = glue(1.0 - x);
    a / (a + b)
}

/// `(χ_int, χ_mid, χ_ext)` at `r`: `χ_int = 1` on `r ≤ ε/2` and vanishes from
/// `ε` on, `χ_ext` vanishes up to `N` and equals 1 from `3N/2` on.
pub fn zone_cutoff(r: f64, eps: f64, n_hi: f64) -> Result<(f64, f64, f64)> {
    if !(eps > 0.0 && eps < n_hi) {
        return Err(Error::invalid(format!("cutoffs need 0 < eps < N, got {eps}, {n_hi}")));
    }
    if !(r >= 0.0) {
        return Err(Error::invalid(format!("r must be >= 0, got {r}")));
    }
    let int = interior_cutoff(r, eps);
    let ext = smooth_step((r - n_hi) / (0.5 * n_hi));
    Ok((int, 1.0 - int - ext, ext))
}

fn interior_cutoff(r: f64, eps: f64) -> f64 {
    1.0 - smooth_step((r - 0.5 * eps) / (0.5 * eps))
}

/// Conjugating matrix and diagonal rates of the reference system at `r`.
fn reference_parts(r: f64, params: &ModelParams) -> Result<(Mat3, [Complex64; 3])> {
    let sigma = params.sigma();
    if params.is_critical() {
        return Err(Error::Unsupported("no improved reference system at sigma = 1".into()));
    }
    let r2 = r * r;
    if sigma < 1.0 {
        let (n1, n1h, _) = structural_corrections(r, sigma);
        let id = Mat3::identity();
        let s = structural_t0() * (id + n1) * (id + n1h);
        let slow = if r == 0.0 { 0.0 } else { r.powf(4.0 - 2.0 * sigma) };
        Ok((s, [re(slow), re(r2), re(params.damping_weight(r))]))
    } else {
        let y = y_constants(YKind::Offset).values;
        Ok((constant_eigenvectors(YKind::Offset)?, [y[0] * r2, y[1] * r2, y[2] * r2]))
    }
}

fn reference_mode(w0: &StateVector, r: f64, params: &ModelParams, t: f64) -> Result<StateVector> {
    if t == 0.0 {
        return Ok(*w0);
    }
    let (s, rates) = reference_parts(r, params)?;
    let s_inv = inverse(&s).ok_or_else(|| Error::Degenerate(format!("reference conjugation singular at r = {r}")))?;
    let e = diag(rates.map(|l| (-l * t).exp()));
    let out = s * e * s_inv * w0.to_vec3();
    Ok(StateVector::from_vec3(&out))
}

/// Solution of the parabolic reference system started from `w0`.
///
/// `σ < 1`: `S·diag(e^{−r^{4−2σ}t}, e^{−r²t}, e^{−r^{2σ}t})·S⁻¹w0` with
/// `S = T0·T1·T1½`. `σ > 1`: `T0·diag(e^{−y_j r²t})·T0⁻¹w0`.
pub fn reference_solution(w0: &StateVector, r: f64, params: &ModelParams, t: f64) -> Result<StateVector> {
    if params.is_critical() {
        return Err(Error::Unsupported("no improved reference system at sigma = 1".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("reference system needs r > 0, got {r}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    reference_mode(w0, r, params, t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionResidual {
    /// Fit of `‖χ_int(D)(w − w̃)(t)‖_{Ḣˢ}`.
    pub fit: DecayFit,
    /// Fit of the plain `‖w(t)‖_{Ḣˢ}` over the same times.
    pub solution_fit: DecayFit,
    pub times: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub solution_norms: Vec<f64>,
}

impl DiffusionResidual {
    /// How much faster the residual decays than the solution.
    pub fn gain(&self) -> f64 {
        self.solution_fit.slope - self.fit.slope
    }
}

/// Residual norms at each time, without fitting.
pub fn residual_norms(
    state0: &SpectralState,
    params: &ModelParams,
    s: f64,
    t: f64,
    eps: f64,
    opts: &PropagatorOptions,
) -> Result<(f64, f64)> {
    let g = state0.grid;
    if g.dim() != params.dim() {
        return Err(Error::GridMismatch("grid and model dimensions differ".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let pairs: Vec<Result<(f64, f64)>> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let w0 = state0.mode(k);
            if w0.norm() == 0.0 {
                return Ok((0.0, 0.0));
            }
            let r = g.magnitude(k);
            let weight = frequency_weight(r, s);
            let p = propagator_matrix(r, params, t, opts);
            let w = crate::evolve::propagator::apply_real(&p, &w0);
            let sol = weight * w.norm().powi(2);
            let chi = interior_cutoff(r, eps);
            if chi == 0.0 {
                return Ok((0.0, sol));
            }
            let wr = reference_mode(&w0, r, params, t)?;
            Ok((weight * (chi * w.distance(&wr)).powi(2), sol))
        })
        .collect();
    let mut res = Vec::with_capacity(pairs.len());
    let mut sol = Vec::with_capacity(pairs.len());
    for p in pairs {
        let (a, b) = p?;
        res.push(a);
        sol.push(b);
    }
    let cell = g.frequency_cell();
    Ok(((deterministic_sum(&res) * cell).sqrt(), (deterministic_sum(&sol) * cell).sqrt()))
}

/// Decay of the difference between the solution and the reference system,
/// localized to the small-frequency zone `r ≤ eps`.
pub fn diffusion_residual(
    state0: &SpectralState,
    params: &ModelParams,
    s: f64,
    times: &[f64],
    eps: f64,
    opts: &PropagatorOptions,
) -> Result<DiffusionResidual> {
    if params.is_critical() {
        return Err(Error::Unsupported("no improved reference system at sigma = 1".into()));
    }
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("s must be >= 0, got {s}")));
    }
    let mut residual = Vec::with_capacity(times.len());
    let mut solution = Vec::with_capacity(times.len());
    for &t in times {
        let (a, b) = residual_norms(state0, params, s, t, eps, opts)?;
        residual.push(a);
        solution.push(b);
    }
    Ok(DiffusionResidual {
        fit: decay_fit(times, &residual)?,
        solution_fit: decay_fit(times, &solution)?,
        times: times.to_vec(),
        residual_norms: residual,
        solution_norms: solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{propagate_mode, Grid};
    use crate::linalg::c;
    use proptest::prelude::*;

    #[test]
    fn cutoff_examples() {
        assert_eq!(zone_cutoff(0.0, 0.1, 10.0).unwrap(), (1.0, 0.0, 0.0));
        assert_eq!(zone_cutoff(20.0, 0.1, 10.0).unwrap(), (0.0, 0.0, 1.0));
        assert_eq!(zone_cutoff(1.0, 0.1, 10.0).unwrap(), (0.0, 1.0, 0.0));
        let (a, b, z) = zone_cutoff(0.08, 0.1, 10.0).unwrap();
        assert!(a > 0.0 && a < 1.0 && b > 0.0 && z == 0.0);
        assert_eq!(zone_cutoff(0.1, 0.1, 10.0).unwrap().0, 0.0);
        assert!(zone_cutoff(1.0, 10.0, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn cutoffs_partition_unity(r in 0.0..40.0f64) {
            let (a, b, z) = zone_cutoff(r, 0.1, 10.0).unwrap();
            prop_assert_eq!(a + b + z, 1.0);
            prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && (0.0..=1.0).contains(&z));
        }
    }

    #[test]
    fn reference_at_zero_time_and_sigma_one() {
        let w = StateVector::new(c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 1.0));
        let p = ModelParams::new(0.3, 1).unwrap();
        assert_eq!(reference_solution(&w, 0.05, &p, 0.0).unwrap(), w);
        let p1 = ModelParams::new(1.0, 1).unwrap();
        assert!(reference_solution(&w, 0.05, &p1, 1.0).is_err());
    }

    #[test]
    fn friction_reference_tracks_solution() {
        let p = ModelParams::new(0.0, 1).unwrap();
        let w = StateVector::from_real(1.0, -1.0, 0.5);
        let r = 0.05;
        let o = PropagatorOptions::default();
        for t in [1e3, 1e4, 1e5] {
            let exact = propagate_mode(&w, r, &p, t, &o);
            let refr = reference_solution(&w, r, &p, t).unwrap();
            let diff = exact.distance(&refr);
            // remainder is of relative size r^{2−2σ} on top of the slow decay
            let envelope = (-(r.powi(4)) * t * 0.5).exp();
            assert!(diff <= 10.0 * r * r * envelope * w.norm(), "t={t}: {diff}");
        }
    }

    #[test]
    fn kelvin_voigt_reference_is_complex_heat_combination() {
        let p = ModelParams::new(2.0, 1).unwrap();
        let w = StateVector::from_real(0.0, 1.0, 0.0);
        let r = 0.05;
        let t = 200.0;
        let refr = reference_solution(&w, r, &p, t).unwrap();
        let exact = propagate_mode(&w, r, &p, t, &PropagatorOptions::default());
        assert!(exact.distance(&refr) < 0.05 * refr.norm().max(1e-300) + 1e-3);
    }

    #[test]
    fn residual_of_zero_data_needs_mass() {
        let g = Grid::new(1, 64, 100.0).unwrap();
        let p = ModelParams::new(0.0, 1).unwrap();
        let st = SpectralState::zeros(g);
        let times: Vec<f64> = (1..=6).map(|i| i as f64 * 10.0).collect();
        assert!(diffusion_residual(&st, &p, 0.0, &times, 0.1, &PropagatorOptions::default()).is_err());
        let p1 = ModelParams::new(1.0, 1).unwrap();
        assert!(matches!(
            diffusion_residual(&st, &p1, 0.0, &times, 0.1, &PropagatorOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
