//! Predicted decay exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which estimate a predicted exponent belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "context", rename_all = "snake_case")]
pub enum RateContext {
    /// `‖|D|^s U(t)‖_{L²}` for data in `L^m ∩ H^s`.
    Energy { sigma: f64, n: usize, m: f64, s: f64 },
    /// `‖|D|^s U(t)‖_{L^q}` for data in `L^p`; `q = ∞` allowed.
    LpLq { sigma: f64, n: usize, p: f64, q: f64, s: f64 },
    /// Sharp two-sided rate for data with nonzero moment.
    Profile { sigma: f64, n: usize, s: f64 },
    /// Extra decay of the difference to the reference system.
    DiffusionGain { sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePrediction {
    pub context: RateContext,
    pub value: f64,
}

impl RatePrediction {
    pub fn new(context: RateContext) -> Result<Self> {
        Ok(RatePrediction {
            context,
            value: expected_rate(&context)?,
        })
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&sigma) {
        return Err(Error::SigmaOutOfRange(sigma));
    }
    Ok(())
}

fn check_common(sigma: f64, n: usize, s: f64) -> Result<()> {
    check_sigma(sigma)?;
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("s must be >= 0, got {s}")));
    }
    Ok(())
}

/// Denominator scale `2−σ` below the threshold, `1` from `σ = 1` on.
fn regime_scale(sigma: f64) -> f64 {
    if sigma < 1.0 {
        2.0 - sigma
    } else {
        1.0
    }
}

pub fn expected_rate(ctx: &RateContext) -> Result<f64> {
    match *ctx {
        RateContext::Energy { sigma, n, m, s } => {
            check_common(sigma, n, s)?;
            if !(1.0..=2.0).contains(&m) {
                return Err(Error::invalid(format!("m must lie in [1, 2], got {m}")));
            }
            let nf = n as f64;
            Ok(((2.0 - m) * nf + 2.0 * m * s) / (4.0 * m * regime_scale(sigma)))
        }
        RateContext::LpLq { sigma, n, p, q, s } => {
            check_common(sigma, n, s)?;
            if !(p >= 1.0 && p <= q) {
                return Err(Error::invalid(format!("need 1 <= p <= q, got p = {p}, q = {q}")));
            }
            let a = 2.0 * regime_scale(sigma);
            Ok(s / a + (n as f64 / a) * (1.0 / p - 1.0 / q))
        }
        RateContext::Profile { sigma, n, s } => {
            check_common(sigma, n, s)?;
            let scale = (2.0 - sigma).max(1.0);
            Ok((n as f64 + 2.0 * s) / (4.0 * scale))
        }
        RateContext::DiffusionGain { sigma } => {
            check_sigma(sigma)?;
            Ok(if sigma < 1.0 {
                (1.0 - sigma) / (2.0 - sigma)
            } else {
                sigma - 1.0
            })
        }
    }
}
