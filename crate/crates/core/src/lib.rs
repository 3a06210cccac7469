//! Secrecy rate regions, outer bounds and secure GDOF regions of the
//! two-user Gaussian Z-interference channel with a shared secret key.
//!
//! All rates are in bits per channel use.

pub mod achievable;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod outer;
pub mod sgdof;
pub mod verify;

pub use achievable::{
    gdof_private_split, key_as_wiretap_point, key_splitting_point, max_sum_rate, one_time_pad_point,
    rate_splitting_point, sweep_region, GridSpec, RateConstraints, Scheme,
};
pub use channel::{classify_regime, half_log2, snr_inr, ChannelParams, Regime, SchemeParams};
pub use error::{Error, Result};
pub use geometry::{
    contains, hull, hull_regions, intersect_halfplanes, subset_of, HalfPlane, RatePoint, Region, RegionMode,
};
pub use outer::{
    composite_outer_region, nonsecrecy_sum_bound, outer_bounds, r2_outer_high, sum_rate_outer,
    sum_rate_outer_no_key, sum_rate_outer_symmetric, OuterBounds,
};
pub use sgdof::{
    gdof_channel, gdof_convergence_check, key_splitting_gdof, key_wc_boxes, key_wc_gdof, no_secrecy_gdof,
    otp_boxes, otp_gdof, rate_splitting_gdof, ConvergenceReport, ConvergenceRung, GdofParams, GdofScheme,
};
pub use verify::{run_battery, VerifyConfig, VerifyReport};
