//! Two-sided sharp profile checks for data with a nonzero moment.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analysis::fit::{decay_fit, DecayFit};
use crate::analysis::norms::sobolev_norm;
use crate::analysis::rates::{expected_rate, RateContext};
use crate::error::{Error, Result};
use crate::evolve::{evolve_spectral, PropagatorOptions, SpectralState};
use crate::model::ModelParams;
use crate::regression::loglog_fit;
use crate::spectrum::{y_constants, YKind};

/// Fraction of the leading-order constant accepted as the lower floor.
pub const LOWER_FLOOR_FRACTION: f64 = 0.1;

/// Moments below this magnitude are treated as zero.
pub const MIN_MOMENT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCheck {
    pub lower_ok: bool,
    pub upper_fit: DecayFit,
    /// `(min, max)` of the compensated norm `t^{rate}‖U(t)‖_{Ḣˢ}`.
    pub ratio_stats: (f64, f64),
    /// Log-log slope of the compensated norm.
    pub compensated_slope: f64,
    pub floor: f64,
    pub rate: f64,
    pub p_norm: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub compensated: Vec<f64>,
}

impl ProfileCheck {
    pub fn band_ratio(&self) -> f64 {
        self.ratio_stats.1 / self.ratio_stats.0
    }
}

/// Surface area of the unit sphere in `ℝⁿ`.
fn sphere_area(n: usize) -> f64 {
    let h = 0.5 * n as f64;
    2.0 * PI.powf(h) / libm::tgamma(h)
}

/// `‖|ξ|^s e^{−tρ|ξ|^a}‖_{L²} = K·(ρt)^{−(2s+n)/(2a)}`; returns `K·ρ^{−(2s+n)/(2a)}`.
fn leading_constant(n: usize, s: f64, a: f64, rho: f64) -> f64 {
    let b = (2.0 * s + n as f64) / a;
    let k2 = sphere_area(n) * libm::tgamma(b) / (a * 2f64.powf(b));
    k2.sqrt() * rho.powf(-0.5 * b)
}

/// Lower floor per unit moment: the leading constant of the slowest
/// dissipative multiplier, with the fastest decay rate on that scale.
pub fn profile_floor_constant(params: &ModelParams, s: f64) -> f64 {
    let n = params.dim();
    let sigma = params.sigma();
    if sigma < 1.0 {
        leading_constant(n, s, 4.0 - 2.0 * sigma, 1.0)
    } else {
        let kind = if params.is_critical() { YKind::Critical } else { YKind::Offset };
        let fastest = y_constants(kind).values.iter().map(|y| y.re).fold(0.0, f64::max);
        leading_constant(n, s, 2.0, fastest)
    }
}

/// Evolves `state0` through `times` and compares `‖U(t)‖_{Ḣˢ}` with the
/// two-sided rate `(n+2s)/(4·max{2−σ,1})`.
pub fn two_sided_profile_check(
    state0: &SpectralState,
    params: &ModelParams,
    s: f64,
    times: &[f64],
    opts: &PropagatorOptions,
) -> Result<ProfileCheck> {
    let p_norm = state0.mode(0).norm();
    if p_norm < MIN_MOMENT {
        return Err(Error::VanishingMoment(p_norm));
    }
    let rate = expected_rate(&RateContext::Profile {
        sigma: params.sigma(),
        n: params.dim(),
        s,
    })?;
    let mut norms = Vec::with_capacity(times.len());
    for &t in times {
        let st = evolve_spectral(state0, params, t, opts)?;
        norms.push(sobolev_norm(&st, s)?);
    }
    let upper_fit = decay_fit(times, &norms)?;
    let compensated: Vec<f64> = times.iter().zip(&norms).map(|(t, v)| t.powf(rate) * v).collect();
    let lo = compensated.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = compensated.iter().copied().fold(0.0, f64::max);
    let compensated_slope = loglog_fit(times, &compensated)
        .map(|f| f.slope)
        .ok_or_else(|| Error::invalid("compensated norm is not positive"))?;
    let floor = LOWER_FLOOR_FRACTION * profile_floor_constant(params, s) * p_norm;
    Ok(ProfileCheck {
        lower_ok: lo >= floor,
        upper_fit,
        ratio_stats: (lo, hi),
        compensated_slope,
        floor,
        rate,
        p_norm,
        times: times.to_vec(),
        norms,
        compensated,
    })
}
