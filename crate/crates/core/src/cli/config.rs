//! Experiment configuration files.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::NormSpec;
use crate::asymptotics::{Zone, ZoneTag, DEFAULT_EPS, DEFAULT_N};
use crate::evolve::{Grid, PropagatorOptions};
use crate::model::ModelParams;

use super::CliError;

/// Names accepted in the `experiment` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    SpectralGap,
    SmoothingExponent,
    RootsVsAsymptotics,
    EvolveSnapshot,
    KernelOracleSigma1,
    ScalarRouteCheck,
    Decay,
    WeightedDecay,
    Diffusion,
    ProfileTwoSided,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::SpectralGap,
        ExperimentKind::SmoothingExponent,
        ExperimentKind::RootsVsAsymptotics,
        ExperimentKind::EvolveSnapshot,
        ExperimentKind::KernelOracleSigma1,
        ExperimentKind::ScalarRouteCheck,
        ExperimentKind::Decay,
        ExperimentKind::WeightedDecay,
        ExperimentKind::Diffusion,
        ExperimentKind::ProfileTwoSided,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SpectralGap => "spectral_gap",
            ExperimentKind::SmoothingExponent => "smoothing_exponent",
            ExperimentKind::RootsVsAsymptotics => "roots_vs_asymptotics",
            ExperimentKind::EvolveSnapshot => "evolve_snapshot",
            ExperimentKind::KernelOracleSigma1 => "kernel_oracle_sigma1",
            ExperimentKind::ScalarRouteCheck => "scalar_route_check",
            ExperimentKind::Decay => "decay",
            ExperimentKind::WeightedDecay => "weighted_decay",
            ExperimentKind::Diffusion => "diffusion",
            ExperimentKind::ProfileTwoSided => "profile_two_sided",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::SpectralGap => {
                "spectral gap lemma: min Re of the roots stays positive on the bounded zone"
            }
            ExperimentKind::SmoothingExponent => {
                "Gevrey smoothing: growth exponent of the high-frequency spectral abscissa"
            }
            ExperimentKind::RootsVsAsymptotics => {
                "asymptotic root expansions: remainder orders in the small or large zone"
            }
            ExperimentKind::EvolveSnapshot => {
                "zero-mode invariants: spatial means of the state under FFT evolution"
            }
            ExperimentKind::KernelOracleSigma1 => {
                "critical case kernel: FFT evolution against the complex Gaussian closed form"
            }
            ExperimentKind::ScalarRouteCheck => {
                "scalar third-order equation: Lagrange-coefficient route against the matrix route"
            }
            ExperimentKind::Decay => "energy and Lp-Lq decay estimates: fitted rate against the prediction",
            ExperimentKind::WeightedDecay => {
                "weighted-data improvement: extra decay for data with vanishing moment"
            }
            ExperimentKind::Diffusion => "diffusion phenomena: gain of the residual to the reference system",
            ExperimentKind::ProfileTwoSided => {
                "sharp two-sided profile: compensated norm stays in a fixed band"
            }
        }
    }

    /// Whether the experiment evolves data on a grid.
    pub fn needs_grid(self) -> bool {
        matches!(
            self,
            ExperimentKind::EvolveSnapshot
                | ExperimentKind::KernelOracleSigma1
                | ExperimentKind::Decay
                | ExperimentKind::WeightedDecay
                | ExperimentKind::Diffusion
                | ExperimentKind::ProfileTwoSided
        )
    }

    /// Whether the time samples feed a power-law fit.
    pub fn fits_times(self) -> bool {
        matches!(
            self,
            ExperimentKind::Decay
                | ExperimentKind::WeightedDecay
                | ExperimentKind::Diffusion
                | ExperimentKind::ProfileTwoSided
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "M")]
    pub points: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `exp(−|x−c|²/(2w²))`.
    #[default]
    Gaussian,
    /// `exp(1 − 1/(1−|x−c|²/w²))` inside the ball of radius `w`, zero outside.
    Bump,
    /// `cos(2π k·x/L)` for the integer wave vector `mode`.
    Cosine,
}

/// Whether `amplitudes` weight the state `(w₁, w₂, w₃)` or `(u₀, u₁, θ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataLevel {
    #[default]
    State,
    Physical,
}

/// Initial data `amplitudes[i]·g(x)` for a closed-form profile `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    #[serde(default)]
    pub family: Family,
    #[serde(default)]
    pub level: DataLevel,
    pub amplitudes: [f64; 3],
    #[serde(default = "default_width")]
    pub width: f64,
    /// Defaults to the origin.
    #[serde(default)]
    pub center: Vec<f64>,
    /// Wave vector of the cosine family; defaults to the first mode on every axis.
    #[serde(default)]
    pub mode: Vec<i64>,
    /// Replace `g(x)` by `g(x) − g(x')`, `x'` being `x` with the last coordinate negated.
    #[serde(default)]
    pub odd: bool,
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    /// Defaults to `10 / min Re λ(ε)`.
    #[serde(default)]
    pub lo: Option<f64>,
    /// Defaults to the trustworthy horizon of the grid.
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeSpec {
    List(Vec<f64>),
    Window(WindowSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneSpec {
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(rename = "N", default = "default_n")]
    pub n_hi: f64,
    #[serde(default = "default_tag")]
    pub tag: ZoneTag,
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

fn default_n() -> f64 {
    DEFAULT_N
}

fn default_tag() -> ZoneTag {
    ZoneTag::Small
}

impl Default for ZoneSpec {
    fn default() -> Self {
        ZoneSpec {
            eps: DEFAULT_EPS,
            n_hi: DEFAULT_N,
            tag: ZoneTag::Small,
        }
    }
}

/// Ranges for scans and random sampling; each experiment documents its defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    #[serde(default)]
    pub r_lo: Option<f64>,
    #[serde(default)]
    pub r_hi: Option<f64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub t_lo: Option<f64>,
    #[serde(default)]
    pub t_hi: Option<f64>,
    #[serde(default)]
    pub sigma_lo: Option<f64>,
    #[serde(default)]
    pub sigma_hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub sigma: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<TimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSpec>,
    #[serde(default)]
    pub zone: ZoneSpec,
    #[serde(default)]
    pub scan: ScanSpec,
    /// Weight exponent of the data space in `weighted_decay`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Overrides the experiment's main tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub propagator: PropagatorOptions,
    /// File stem of the CSV and manifest outputs.
    pub output: String,
    #[serde(default)]
    pub seed: u64,
}

fn default_dim() -> usize {
    1
}

/// A configuration with every range checked and every object constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub kind: ExperimentKind,
    pub params: ModelParams,
    pub grid: Option<Grid>,
    pub zone: Zone,
    pub config: ExperimentConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks every parameter range before any computation starts.
    pub fn validate(&self) -> Result<Validated, CliError> {
        let kind: ExperimentKind = self.experiment.parse()?;
        let params = ModelParams::new(self.sigma, self.dim)?;
        let zone = Zone::new(self.zone.tag, self.zone.eps, self.zone.n_hi)?;
        self.propagator.validate()?;
        if self.output.is_empty() || self.output.contains(['/', '\\']) {
            return Err(CliError::config("output must be a plain file stem"));
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::config(format!("tolerance must be positive, got {tol}")));
            }
        }
        if let Some(norm) = &self.norm {
            norm.validate()?;
        }
        if let Some(delta) = self.delta {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(CliError::config(format!("delta must lie in (0, 1], got {delta}")));
            }
        }
        self.validate_scan()?;
        let grid = if kind.needs_grid() {
            let spec = self
                .grid
                .ok_or_else(|| CliError::config(format!("{kind} needs a grid")))?;
            let grid = Grid::new(self.dim, spec.points, spec.length)?;
            let data = self
                .data
                .as_ref()
                .ok_or_else(|| CliError::config(format!("{kind} needs a data spec")))?;
            validate_data(data, self.dim)?;
            if self.times.is_none() {
                return Err(CliError::config(format!("{kind} needs times or a window")));
            }
            Some(grid)
        } else {
            None
        };
        if let Some(TimeSpec::List(times)) = &self.times {
            validate_times(times, kind.fits_times())?;
        }
        if let Some(TimeSpec::Window(w)) = &self.times {
            if !kind.fits_times() {
                return Err(CliError::config(format!("{kind} needs an explicit time list")));
            }
            if let Some(n) = w.samples {
                if n < crate::analysis::fit::MIN_FIT_SAMPLES {
                    return Err(CliError::config(format!("window needs at least 6 samples, got {n}")));
                }
            }
            for v in [w.lo, w.hi].into_iter().flatten() {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::config(format!("window bounds must be positive, got {v}")));
                }
            }
        }
        self.validate_kind(kind, &params)?;
        Ok(Validated {
            kind,
            params,
            grid,
            zone,
            config: self.clone(),
        })
    }

    fn validate_scan(&self) -> Result<(), CliError> {
        let s = &self.scan;
        for (name, v) in [("r_lo", s.r_lo), ("r_hi", s.r_hi)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::config(format!("scan.{name} must be positive, got {v}")));
                }
            }
        }
        for (name, v) in [("t_lo", s.t_lo), ("t_hi", s.t_hi)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(CliError::config(format!("scan.{name} must be >= 0, got {v}")));
                }
            }
        }
        for (name, v) in [("sigma_lo", s.sigma_lo), ("sigma_hi", s.sigma_hi)] {
            if let Some(v) = v {
                if !(0.0..=2.0).contains(&v) {
                    return Err(CliError::config(format!("scan.{name} must lie in [0, 2], got {v}")));
                }
            }
        }
        let ordered = |lo: Option<f64>, hi: Option<f64>| match (lo, hi) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        if !ordered(s.r_lo, s.r_hi) || !ordered(s.t_lo, s.t_hi) || !ordered(s.sigma_lo, s.sigma_hi) {
            return Err(CliError::config("scan ranges must satisfy lo <= hi"));
        }
        Ok(())
    }

    fn validate_kind(&self, kind: ExperimentKind, params: &ModelParams) -> Result<(), CliError> {
        match kind {
            ExperimentKind::RootsVsAsymptotics => {
                if params.is_critical() {
                    return Err(CliError::config(
                        "roots are exactly y·r² at sigma = 1; use spectral_gap or smoothing_exponent",
                    ));
                }
                if self.zone.tag == ZoneTag::Bounded {
                    return Err(CliError::config("roots_vs_asymptotics needs the small or large zone"));
                }
            }
            ExperimentKind::KernelOracleSigma1 => {
                if !params.is_critical() {
                    return Err(CliError::config("kernel_oracle_sigma1 needs sigma = 1"));
                }
                let d = self.data.as_ref().expect("checked above");
                if d.family != Family::Gaussian || d.level != DataLevel::State || d.odd {
                    return Err(CliError::config(
                        "kernel_oracle_sigma1 needs plain state-level Gaussian data",
                    ));
                }
            }
            ExperimentKind::WeightedDecay => {
                let d = self.data.as_ref().expect("checked above");
                if !d.odd {
                    return Err(CliError::config("weighted_decay needs odd-symmetrized data"));
                }
            }
            _ => {}
        }
        if let Some(NormSpec::WeightedL1 { .. }) = self.norm {
            if kind.needs_grid() {
                return Err(CliError::config("the weighted L1 norm measures data, not solutions"));
            }
        }
        Ok(())
    }
}

fn validate_data(d: &DataSpec, dim: usize) -> Result<(), CliError> {
    if !(d.width > 0.0 && d.width.is_finite()) {
        return Err(CliError::config(format!("data width must be positive, got {}", d.width)));
    }
    if d.amplitudes.iter().any(|a| !a.is_finite()) {
        return Err(CliError::config("data amplitudes must be finite"));
    }
    if !d.center.is_empty() && d.center.len() != dim {
        return Err(CliError::config(format!(
            "data center has {} coordinates, expected {dim}",
            d.center.len()
        )));
    }
    if !d.mode.is_empty() && d.mode.len() != dim {
        return Err(CliError::config(format!(
            "cosine mode has {} entries, expected {dim}",
            d.mode.len()
        )));
    }
    Ok(())
}

fn validate_times(times: &[f64], for_fit: bool) -> Result<(), CliError> {
    if times.is_empty() {
        return Err(CliError::config("time list is empty"));
    }
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::config("times must be finite and >= 0"));
    }
    if for_fit {
        if times.len() < crate::analysis::fit::MIN_FIT_SAMPLES {
            return Err(CliError::config(format!(
                "decay fits need at least 6 times, got {}",
                times.len()
            )));
        }
        if !(times[0] > 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::config("fit times must be positive and strictly increasing"));
        }
    }
    Ok(())
}
