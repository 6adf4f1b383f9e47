//! Power-law fits of norm trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::loglog_fit;

pub const MIN_FIT_SAMPLES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Least squares of `ln value` on `ln time`.
pub fn decay_fit(times: &[f64], values: &[f64]) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::invalid("times and values differ in length"));
    }
    if times.len() < MIN_FIT_SAMPLES {
        return Err(Error::invalid(format!(
            "decay fits need at least {MIN_FIT_SAMPLES} samples, got {}",
            times.len()
        )));
    }
    if !(times[0] > 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("times must be positive and strictly increasing"));
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NonPositive { index, value });
    }
    let f = loglog_fit(times, values).ok_or_else(|| Error::invalid("degenerate fit"))?;
    Ok(DecayFit {
        slope: f.slope,
        intercept: f.intercept,
        r_squared: f.r_squared,
        window: (times[0], times[times.len() - 1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::log_space;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power_law() {
        let t = log_space(1.0, 100.0, 12);
        let v: Vec<f64> = t.iter().map(|x| x.powf(-0.25)).collect();
        let f = decay_fit(&t, &v).unwrap();
        assert!((f.slope + 0.25).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.window, (1.0, 100.0));
    }

    #[test]
    fn constant_values() {
        let t = log_space(1.0, 100.0, 8);
        let f = decay_fit(&t, &[3.0; 8]).unwrap();
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = log_space(10.0, 1000.0, 40);
        let v: Vec<f64> = t
            .iter()
            .map(|x| x.powf(-0.5) * (1.0 + 0.01 * (rng.random::<f64>() * 2.0 - 1.0)))
            .collect();
        let f = decay_fit(&t, &v).unwrap();
        assert!((f.slope + 0.5).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_input() {
        let t = log_space(1.0, 10.0, 6);
        assert!(matches!(
            decay_fit(&t, &[1.0, 1.0, 0.0, 1.0, 1.0, 1.0]),
            Err(Error::NonPositive { index: 2, .. })
        ));
        assert!(decay_fit(&t[..5], &[1.0; 5]).is_err());
        let mut rev = t.clone();
        rev.reverse();
        assert!(decay_fit(&rev, &[1.0; 6]).is_err());
    }
}
