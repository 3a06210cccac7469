//! Outer bounds on the secrecy capacity region.

use serde::{Deserialize, Serialize};

use crate::channel::{half_log2, ChannelParams};
use crate::geometry::{intersect_halfplanes, HalfPlane, Region, RegionMode};

/// Bound values for one channel. `None` marks a bound that does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterBounds {
    pub r1_p2p: f64,
    pub r2_p2p: f64,
    /// `L(1+snr2) - L(1+inr1) + rk`, present when `snr2 > inr1`.
    pub r2_thm3: Option<f64>,
    pub r2_thm4: f64,
    pub sum_thm3: Option<f64>,
    /// Genie-aided sum bound without secrecy; external to the secrecy
    /// analysis and off unless requested.
    pub sum_nonsecrecy: Option<f64>,
}

/// Symmetric sum bound `log2(1+snr) - L(1+inr) + rk`, valid for `snr > inr`.
pub fn sum_rate_outer_symmetric(snr: f64, inr: f64, rk: f64) -> Option<f64> {
    (snr > inr).then(|| 2.0 * half_log2(1.0 + snr) - half_log2(1.0 + inr) + rk)
}

/// The same bound with no shared key.
pub fn sum_rate_outer_no_key(snr: f64, inr: f64) -> Option<f64> {
    (snr > inr).then(|| (1.0 + snr).log2() - 0.5 * (1.0 + inr).log2())
}

fn r2_wiretap_part(ch: &ChannelParams) -> Option<f64> {
    let (snr2, inr1) = (ch.snr2(), ch.inr1());
    (snr2 > inr1).then(|| half_log2(1.0 + snr2) - half_log2(1.0 + inr1) + ch.rk)
}

/// Sum-rate bound for general gains: the R1 point-to-point cap plus the
/// user-2 wiretap part. Absent unless `snr2 > inr1`.
pub fn sum_rate_outer(ch: &ChannelParams) -> Option<f64> {
    r2_wiretap_part(ch).map(|r2| half_log2(1.0 + ch.snr1()) + r2)
}

/// Bound on user 2's secrecy rate that tends to `rk` as interference grows.
pub fn r2_outer_high(ch: &ChannelParams) -> f64 {
    let (snr1, snr2, inr1) = (ch.snr1(), ch.snr2(), ch.inr1());
    // 1 + snr2 - snr2*inr1/(1+snr1+inr1), without the cancellation.
    half_log2(1.0 + snr2 * (1.0 + snr1) / (1.0 + snr1 + inr1)) + ch.rk
}

pub fn nonsecrecy_sum_bound(ch: &ChannelParams) -> f64 {
    let (snr1, snr2, inr1) = (ch.snr1(), ch.snr2(), ch.inr1());
    half_log2(1.0 + snr1 + inr1) + half_log2((1.0 + snr2) / (1.0 + inr1)).max(0.0)
}

pub fn outer_bounds(ch: &ChannelParams, include_nonsecrecy: bool) -> OuterBounds {
    OuterBounds {
        r1_p2p: half_log2(1.0 + ch.snr1()),
        r2_p2p: half_log2(1.0 + ch.snr2()),
        r2_thm3: r2_wiretap_part(ch),
        r2_thm4: r2_outer_high(ch),
        sum_thm3: sum_rate_outer(ch),
        sum_nonsecrecy: include_nonsecrecy.then(|| nonsecrecy_sum_bound(ch)),
    }
}

impl OuterBounds {
    /// Tightest R2 face. The wiretap part only enters through the sum face:
    /// with artificial noise from Tx1 user 2 can exceed it on its own.
    pub fn r2_face(&self) -> f64 {
        self.r2_thm4.min(self.r2_p2p)
    }

    pub fn sum_face(&self) -> Option<f64> {
        match (self.sum_thm3, self.sum_nonsecrecy) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn region(&self) -> Region {
        let mut planes = vec![
            HalfPlane::r1_at_most(self.r1_p2p),
            HalfPlane::r2_at_most(self.r2_face()),
        ];
        if let Some(s) = self.sum_face() {
            planes.push(HalfPlane::sum_at_most(s));
        }
        intersect_halfplanes(&planes, RegionMode::Rate).expect("box faces are finite and non-negative")
    }
}

/// Intersection of all applicable outer bounds.
pub fn composite_outer_region(ch: &ChannelParams, include_nonsecrecy: bool) -> Region {
    outer_bounds(ch, include_nonsecrecy).region()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RatePoint;

    fn sym(hc: f64, rk: f64) -> ChannelParams {
        ChannelParams::symmetric(1.0, hc, 100.0, rk).unwrap()
    }

    #[test]
    fn symmetric_and_general_forms_agree() {
        let ch = sym(0.6, 1.0);
        let a = sum_rate_outer(&ch).unwrap();
        let b = sum_rate_outer_symmetric(100.0, 36.0, 1.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn gate_fails_at_equality_and_above() {
        assert_eq!(sum_rate_outer_symmetric(36.0, 100.0, 1.0), None);
        assert_eq!(sum_rate_outer_symmetric(100.0, 100.0, 0.0), None);
        assert_eq!(sum_rate_outer(&sym(1.0, 0.0)), None);
        let ob = outer_bounds(&sym(1.0, 0.0), false);
        assert_eq!(ob.sum_thm3, None);
        assert_eq!(ob.r2_thm3, None);
        assert_eq!(ob.region().vertices().len(), 4);
    }

    #[test]
    fn no_interference_r2_bound_is_point_to_point_plus_key() {
        let ch = sym(0.0, 0.7);
        assert_eq!(r2_outer_high(&ch), half_log2(101.0) + 0.7);
    }

    #[test]
    fn interference_free_large_key_gives_rectangle() {
        let ch = ChannelParams::new(1.0, 1.5, 0.0, 100.0, 40.0, 1e6).unwrap();
        let r = composite_outer_region(&ch, false);
        let c1 = half_log2(101.0);
        let c2 = half_log2(1.0 + 2.25 * 40.0);
        assert_eq!(r.vertices().len(), 4);
        assert!((r.max_r1() - c1).abs() < 1e-12);
        assert!((r.max_r2() - c2).abs() < 1e-12);
    }

    #[test]
    fn nonsecrecy_bound_clamps_and_decouples() {
        let free = ChannelParams::new(1.0, 1.0, 0.0, 100.0, 50.0, 0.0).unwrap();
        assert!((nonsecrecy_sum_bound(&free) - half_log2(101.0) - half_log2(51.0)).abs() < 1e-12);
        let strong = sym(1.5, 0.0);
        assert_eq!(nonsecrecy_sum_bound(&strong), half_log2(1.0 + 100.0 + 225.0));
    }

    #[test]
    fn nonsecrecy_flag_only_tightens() {
        let ch = sym(0.6, 3.0);
        let loose = composite_outer_region(&ch, false);
        let tight = composite_outer_region(&ch, true);
        assert!(crate::geometry::subset_of(&tight, &loose, 1e-12));
        assert!(tight.max_sum() < loose.max_sum());
        assert!(outer_bounds(&ch, false).sum_nonsecrecy.is_none());
    }

    #[test]
    fn bounds_have_no_nan() {
        for hc in [0.0, 0.6, 1.0, 1.2, 5.0] {
            for rk in [0.0, 1.0] {
                let ob = outer_bounds(&sym(hc, rk), true);
                for v in [Some(ob.r1_p2p), Some(ob.r2_p2p), ob.r2_thm3, Some(ob.r2_thm4), ob.sum_thm3, ob.sum_nonsecrecy]
                    .into_iter()
                    .flatten()
                {
                    assert!(v.is_finite() && v >= 0.0);
                }
            }
        }
    }

    #[test]
    fn origin_always_inside() {
        let r = composite_outer_region(&sym(0.9, 0.0), true);
        assert!(crate::geometry::contains(&r, RatePoint::ORIGIN, 0.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn channel() -> impl Strategy<Value = ChannelParams> {
            (0.1f64..2.0, 0.1f64..2.0, 0.0f64..2.0, 1.0f64..1000.0, 1.0f64..1000.0, 0.0f64..3.0)
                .prop_map(|(a, b, c, p1, p2, rk)| ChannelParams::new(a, b, c, p1, p2, rk).unwrap())
        }

        proptest! {
            #[test]
            fn key_enters_with_unit_slope(ch in channel(), d in 0.0f64..4.0) {
                let up = ch.with_rk(ch.rk + d);
                let t4 = r2_outer_high(&up) - r2_outer_high(&ch);
                prop_assert!((t4 - d).abs() < 1e-12);
                if let (Some(a), Some(b)) = (sum_rate_outer(&ch), sum_rate_outer(&up)) {
                    prop_assert!((b - a - d).abs() < 1e-12);
                }
            }

            #[test]
            fn no_key_form_matches_at_zero_key(snr in 0.0f64..1e4, inr in 0.0f64..1e4) {
                prop_assert_eq!(sum_rate_outer_symmetric(snr, inr, 0.0), sum_rate_outer_no_key(snr, inr));
            }

            #[test]
            fn stable_form_matches_textbook_form(ch in channel()) {
                let (s1, s2, i1) = (ch.snr1(), ch.snr2(), ch.inr1());
                let naive = half_log2(1.0 + s2 - s2 * i1 / (1.0 + s1 + i1)) + ch.rk;
                prop_assert!((naive - r2_outer_high(&ch)).abs() < 1e-9);
            }
        }
    }
}
