//! Norms, moments, predicted rates, decay fits, reference systems and
//! profile checks.

pub mod fit;
pub mod moments;
pub mod norms;
pub mod profile;
pub mod rates;
pub mod reference;
pub mod window;

pub use fit::{decay_fit, DecayFit};
pub use moments::{moment, moment_constant, MomentDecomp};
pub use norms::{
    deterministic_sum, lebesgue_norm, magnitude_field, sobolev_norm, sobolev_norm_field,
    weighted_l1_norm, NormSpec, WeightedL1,
};
pub use profile::{two_sided_profile_check, ProfileCheck};
pub use rates::{expected_rate, RateContext, RatePrediction};
pub use reference::{diffusion_residual, reference_solution, zone_cutoff, DiffusionResidual};
pub use window::{default_window, horizon_violation, trustworthy_horizon, window_times};
