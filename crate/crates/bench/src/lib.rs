//! Fixtures shared by the benchmarks.

use zic_core::{ChannelParams, GdofParams, RatePoint};

/// The weak-interference channel used for the headline region plot.
pub fn weak_channel() -> ChannelParams {
    ChannelParams::symmetric(1.0, 0.6, 100.0, 0.2).expect("valid channel")
}

/// The high-interference counterpart.
pub fn strong_channel() -> ChannelParams {
    ChannelParams::symmetric(1.0, 1.2, 100.0, 1.0).expect("valid channel")
}

pub fn gdof_params() -> GdofParams {
    GdofParams::new(0.3, 0.3, 1.0).expect("valid parameters")
}

/// `n` points on a noisy quarter circle, enough to exercise the hull.
pub fn cloud(n: usize) -> Vec<RatePoint> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    (0..n)
        .map(|i| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let jitter = (state >> 11) as f64 / (1u64 << 53) as f64;
            let t = std::f64::consts::FRAC_PI_2 * i as f64 / n as f64;
            let r = 3.0 * (0.8 + 0.2 * jitter);
            RatePoint::new(r * t.cos(), r * t.sin())
        })
        .collect()
}
