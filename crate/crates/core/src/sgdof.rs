//! Secure generalized degrees of freedom.
//!
//! Regions live in the `(d1, d2)` plane: rates normalized by `0.5 log2 snr`
//! in the limit where `inr = snr^alpha` and `rk = gamma * 0.5 log2 snr`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::achievable::{
    gdof_private_split, key_as_wiretap_point, key_splitting_point, one_time_pad_point, rate_splitting_point,
    RateConstraints,
};
use crate::channel::{half_log2, ChannelParams, SchemeParams};
use crate::error::{check_nonneg, check_unit, Error, Result};
use crate::geometry::{hull, intersect_halfplanes, HalfPlane, RatePoint, Region, RegionMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GdofParams {
    pub alpha: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl GdofParams {
    pub fn new(alpha: f64, gamma: f64, eta: f64) -> Result<Self> {
        let gp = Self { alpha, gamma, eta };
        gp.validate()?;
        Ok(gp)
    }

    /// Only the weak/moderate regime `alpha <= 1` is characterized.
    pub fn validate(&self) -> Result<()> {
        check_nonneg("alpha", self.alpha)?;
        check_nonneg("gamma", self.gamma)?;
        check_unit("eta", self.eta)?;
        if self.alpha > 1.0 {
            return Err(Error::Domain {
                name: "alpha",
                value: self.alpha,
                domain: "[0, 1]",
            });
        }
        Ok(())
    }
}

fn polytope(d1: f64, d2: f64, sum: f64) -> Region {
    let planes = [
        HalfPlane::r1_at_most(d1),
        HalfPlane::r2_at_most(d2),
        HalfPlane::sum_at_most(sum),
    ];
    intersect_halfplanes(&planes, RegionMode::Gdof).expect("faces are finite and non-negative")
}

fn boxed(d1: f64, d2: f64) -> Region {
    hull(&[RatePoint::new(d1, d2)], RegionMode::Gdof).expect("box corner is non-negative")
}

fn hull_of_boxes(a: (f64, f64), b: (f64, f64)) -> Region {
    hull(&[RatePoint::new(a.0, a.1), RatePoint::new(b.0, b.1)], RegionMode::Gdof)
        .expect("box corners are non-negative")
}

/// Key splitting without artificial noise.
pub fn key_splitting_gdof(gp: &GdofParams) -> Result<Region> {
    gp.validate()?;
    let a = gp.alpha;
    Ok(polytope(1.0, a.min(gp.eta * gp.gamma) + 1.0 - a, 2.0 - a))
}

/// The whole key encrypts the common message.
pub fn rate_splitting_gdof(gp: &GdofParams) -> Result<Region> {
    gp.validate()?;
    let a = gp.alpha;
    Ok(polytope(1.0, a.min(gp.gamma) + 1.0 - a, 2.0 - a))
}

/// The two boxes whose hull is the key-as-wiretap region: a fixed power
/// split and plain time sharing.
pub fn key_wc_boxes(gp: &GdofParams) -> Result<[Region; 2]> {
    gp.validate()?;
    let a = gp.alpha;
    Ok([boxed(1.0 - a, 1.0f64.min(1.0 - a + gp.gamma)), boxed(1.0, 1.0 - a)])
}

pub fn key_wc_gdof(gp: &GdofParams) -> Result<Region> {
    gp.validate()?;
    let a = gp.alpha;
    Ok(hull_of_boxes((1.0 - a, 1.0f64.min(1.0 - a + gp.gamma)), (1.0, 1.0 - a)))
}

pub fn otp_boxes(gp: &GdofParams) -> Result<[Region; 2]> {
    gp.validate()?;
    let (a, g) = (gp.alpha, gp.gamma);
    Ok([boxed(1.0 - a, g.min(1.0)), boxed(1.0, g.min(1.0 - a))])
}

pub fn otp_gdof(gp: &GdofParams) -> Result<Region> {
    gp.validate()?;
    let (a, g) = (gp.alpha, gp.gamma);
    Ok(hull_of_boxes((1.0 - a, g.min(1.0)), (1.0, g.min(1.0 - a))))
}

/// GDOF region of the Z channel without any secrecy constraint.
pub fn no_secrecy_gdof(alpha: f64) -> Result<Region> {
    GdofParams::new(alpha, 0.0, 0.0)?;
    Ok(polytope(1.0, 1.0, 2.0 - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GdofScheme {
    /// Uses the key split `eta` from [`GdofParams`].
    KeySplitting,
    RateSplitting,
    KeyAsWiretap,
    OneTimePad,
}

impl GdofScheme {
    pub const ALL: [GdofScheme; 4] = [
        GdofScheme::KeySplitting,
        GdofScheme::RateSplitting,
        GdofScheme::KeyAsWiretap,
        GdofScheme::OneTimePad,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            GdofScheme::KeySplitting => "key-splitting",
            GdofScheme::RateSplitting => "rate-splitting",
            GdofScheme::KeyAsWiretap => "key-as-wc",
            GdofScheme::OneTimePad => "otp",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.slug() == s)
    }

    pub fn region(self, gp: &GdofParams) -> Result<Region> {
        match self {
            GdofScheme::KeySplitting => key_splitting_gdof(gp),
            GdofScheme::RateSplitting => rate_splitting_gdof(gp),
            GdofScheme::KeyAsWiretap => key_wc_gdof(gp),
            GdofScheme::OneTimePad => otp_gdof(gp),
        }
    }
}

/// Symmetric channel realizing `(alpha, gamma)` at a given snr:
/// unit direct gains, `P = snr`, `h_c^2 P = snr^alpha`.
pub fn gdof_channel(snr: f64, gp: &GdofParams) -> Result<ChannelParams> {
    let hc = (snr.powf(gp.alpha) / snr).sqrt();
    ChannelParams::symmetric(1.0, hc, snr, gp.gamma * half_log2(snr))
}

/// Operating points whose hull is the finite-snr counterpart of the scheme's
/// GDOF region. Key splitting uses no artificial noise and the private split
/// that lands user 2's private message at receiver 1's noise floor.
fn finite_snr_constraints(ch: &ChannelParams, gp: &GdofParams, scheme: GdofScheme) -> Result<Vec<RateConstraints>> {
    let powers = [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0)];
    match scheme {
        GdofScheme::KeySplitting | GdofScheme::RateSplitting => {
            let l2 = gdof_private_split(ch);
            powers
                .iter()
                .map(|&(b1, b2)| {
                    let sp = SchemeParams::new(1.0, l2, b1, b2, gp.eta)?;
                    if scheme == GdofScheme::KeySplitting {
                        key_splitting_point(ch, &sp)
                    } else {
                        rate_splitting_point(ch, &sp)
                    }
                })
                .collect()
        }
        GdofScheme::KeyAsWiretap | GdofScheme::OneTimePad => {
            // Backing Tx2 off to the noise floor of receiver 1.
            let g21p = ch.h21 * ch.h21 * ch.p2;
            let b2_floor = if g21p > 1.0 { 1.0 / g21p } else { 1.0 };
            [(1.0, 1.0), (1.0, b2_floor), (1.0, 0.0), (0.0, 1.0)]
                .iter()
                .map(|&(b1, b2)| {
                    if scheme == GdofScheme::KeyAsWiretap {
                        key_as_wiretap_point(ch, b1, b2)
                    } else {
                        one_time_pad_point(ch, b1, b2)
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRung {
    pub snr: f64,
    /// Vertices of the finite-snr region normalized by `0.5 log2 snr`.
    pub corners: Vec<RatePoint>,
    /// Largest distance from a claimed GDOF corner to the normalized region.
    pub shortfall: f64,
    /// Largest distance from a normalized corner to the claimed region.
    pub overshoot: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub scheme: GdofScheme,
    pub params: GdofParams,
    pub claimed: Vec<RatePoint>,
    pub rungs: Vec<ConvergenceRung>,
    /// Gaps never grow from one rung to the next.
    pub monotone: bool,
    pub final_gap: f64,
}

impl ConvergenceReport {
    pub fn converged(&self, threshold: f64) -> bool {
        self.monotone && self.final_gap < threshold
    }
}

/// Compares normalized finite-snr regions against the claimed GDOF region
/// along an increasing snr ladder.
pub fn gdof_convergence_check(ladder: &[f64], gp: &GdofParams, scheme: GdofScheme) -> Result<ConvergenceReport> {
    gp.validate()?;
    if ladder.len() < 4 {
        return Err(Error::LadderTooShort(ladder.len()));
    }
    if let Some(&bad) = ladder.iter().find(|&&s| !(s.is_finite() && s > 1.0)) {
        return Err(Error::Domain {
            name: "snr",
            value: bad,
            domain: "(1, inf)",
        });
    }
    if let Some(w) = ladder.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Domain {
            name: "snr",
            value: w[1],
            domain: "strictly increasing ladder",
        });
    }

    let claimed = scheme.region(gp)?;
    let rungs = ladder
        .par_iter()
        .map(|&snr| {
            let ch = gdof_channel(snr, gp)?;
            let scale = half_log2(snr);
            let pts: Vec<RatePoint> = finite_snr_constraints(&ch, gp, scheme)?
                .iter()
                .flat_map(|rc| rc.corners())
                .map(|p| RatePoint::new(p.r1 / scale, p.r2 / scale))
                .collect();
            let finite = hull(&pts, RegionMode::Gdof)?;
            let shortfall = claimed
                .vertices()
                .iter()
                .map(|&v| finite.distance_to(v))
                .fold(0.0, f64::max);
            let overshoot = finite
                .vertices()
                .iter()
                .map(|&v| claimed.distance_to(v))
                .fold(0.0, f64::max);
            Ok(ConvergenceRung {
                snr,
                corners: finite.vertices().to_vec(),
                shortfall,
                overshoot,
                gap: shortfall.max(overshoot),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let monotone = rungs.windows(2).all(|w| w[1].gap <= w[0].gap);
    let final_gap = rungs.last().map_or(f64::INFINITY, |r| r.gap);
    Ok(ConvergenceReport {
        scheme,
        params: *gp,
        claimed: claimed.vertices().to_vec(),
        rungs,
        monotone,
        final_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::subset_of;

    fn gp(a: f64, g: f64, e: f64) -> GdofParams {
        GdofParams::new(a, g, e).unwrap()
    }

    fn pts(v: &[(f64, f64)]) -> Vec<RatePoint> {
        v.iter().map(|&(a, b)| RatePoint::new(a, b)).collect()
    }

    fn close(a: &Region, b: &[(f64, f64)]) -> bool {
        let want = pts(b);
        a.vertices().len() == want.len()
            && a.vertices()
                .iter()
                .zip(&want)
                .all(|(x, y)| (x.r1 - y.r1).abs() < 1e-12 && (x.r2 - y.r2).abs() < 1e-12)
    }

    #[test]
    fn key_splitting_faces() {
        let r = key_splitting_gdof(&gp(0.8, 0.3, 1.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.2), (0.7, 0.5), (0.0, 0.5)]));
        let r = key_splitting_gdof(&gp(0.4, 0.0, 0.7)).unwrap();
        assert!((r.max_r2() - 0.6).abs() < 1e-12);
        let r = key_splitting_gdof(&gp(0.0, 0.9, 0.5)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
    }

    #[test]
    fn rate_splitting_faces() {
        let r = rate_splitting_gdof(&gp(0.3, 0.3, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.7), (0.7, 1.0), (0.0, 1.0)]));
        let r = rate_splitting_gdof(&gp(0.5, 0.1, 0.0)).unwrap();
        assert!((r.max_r2() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn key_wc_hull() {
        let r = key_wc_gdof(&gp(0.5, 0.2, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 0.7), (0.0, 0.7)]));
        let r = key_wc_gdof(&gp(0.4, 0.0, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.6), (0.0, 0.6)]));
        let r = key_wc_gdof(&gp(0.3, 0.9, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.7), (0.7, 1.0), (0.0, 1.0)]));
    }

    #[test]
    fn otp_hull() {
        let r = otp_gdof(&gp(0.5, 0.1, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.1), (0.0, 0.1)]));
        let r = otp_gdof(&gp(0.5, 0.0, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0)]));
        let r = otp_gdof(&gp(0.3, 1.0, 0.0)).unwrap();
        assert!(close(&r, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.7), (0.7, 1.0), (0.0, 1.0)]));
    }

    #[test]
    fn boxes_lie_inside_hulls() {
        let p = gp(0.6, 0.25, 0.0);
        let h = key_wc_gdof(&p).unwrap();
        for b in key_wc_boxes(&p).unwrap() {
            assert!(subset_of(&b, &h, 1e-12));
        }
        let h = otp_gdof(&p).unwrap();
        for b in otp_boxes(&p).unwrap() {
            assert!(subset_of(&b, &h, 1e-12));
        }
    }

    #[test]
    fn strong_interference_is_rejected() {
        assert!(matches!(GdofParams::new(1.2, 0.1, 1.0), Err(Error::Domain { name: "alpha", .. })));
        let raw = GdofParams { alpha: 1.01, gamma: 0.0, eta: 0.0 };
        assert!(key_splitting_gdof(&raw).is_err());
        assert!(otp_gdof(&raw).is_err());
        assert!(no_secrecy_gdof(1.5).is_err());
        assert!(GdofParams::new(0.5, -0.1, 0.0).is_err());
        assert!(GdofParams::new(0.5, 0.1, 1.1).is_err());
    }

    #[test]
    fn ladder_validation() {
        let p = gp(0.5, 0.1, 0.0);
        assert_eq!(
            gdof_convergence_check(&[1e2, 1e3, 1e4], &p, GdofScheme::OneTimePad),
            Err(Error::LadderTooShort(3))
        );
        assert!(gdof_convergence_check(&[1e2, 1e4, 1e3, 1e6], &p, GdofScheme::OneTimePad).is_err());
        assert!(gdof_convergence_check(&[1.0, 1e2, 1e3, 1e4], &p, GdofScheme::OneTimePad).is_err());
    }

    #[test]
    fn family_realizes_exponents() {
        let p = gp(0.5, 0.2, 1.0);
        let ch = gdof_channel(1e4, &p).unwrap();
        assert!((ch.snr1() - 1e4).abs() < 1e-8);
        assert!((ch.inr1() - 100.0).abs() < 1e-9);
        assert!((ch.rk - 0.2 * half_log2(1e4)).abs() < 1e-12);
    }

    #[test]
    fn otp_without_key_has_zero_d2() {
        let r = gdof_convergence_check(&[1e2, 1e3, 1e4, 1e6], &gp(0.5, 0.0, 0.0), GdofScheme::OneTimePad).unwrap();
        for rung in &r.rungs {
            assert!(rung.corners.iter().all(|c| c.r2 == 0.0));
        }
    }

    #[test]
    fn otp_converges() {
        let r = gdof_convergence_check(&[1e2, 1e3, 1e4, 1e6], &gp(0.5, 0.1, 0.0), GdofScheme::OneTimePad).unwrap();
        assert!(r.monotone);
        assert!(r.final_gap < 0.05, "{:?}", r.rungs.iter().map(|x| x.gap).collect::<Vec<_>>());
        let top = r.rungs.last().unwrap();
        let max_d2 = top.corners.iter().map(|c| c.r2).fold(0.0, f64::max);
        assert!((max_d2 - 0.1).abs() < 0.05);
    }

    #[test]
    fn key_splitting_sum_corner_approaches_two_minus_alpha() {
        let ladder = [1e2, 1e4, 1e8, 1e12, 1e20];
        let r = gdof_convergence_check(&ladder, &gp(0.3, 0.3, 1.0), GdofScheme::KeySplitting).unwrap();
        let sums: Vec<f64> = r
            .rungs
            .iter()
            .map(|x| x.corners.iter().map(|c| c.r1 + c.r2).fold(0.0, f64::max))
            .collect();
        assert!(sums.windows(2).all(|w| w[1] > w[0]), "{sums:?}");
        assert!((sums.last().unwrap() - 1.7).abs() < 0.05, "{sums:?}");
        assert!(r.monotone);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = GdofParams> {
            (0.0f64..=1.0, 0.0f64..2.0, 0.0f64..=1.0).prop_map(|(a, g, e)| GdofParams::new(a, g, e).unwrap())
        }

        proptest! {
            #[test]
            fn rate_splitting_is_key_splitting_at_eta_one(p in params()) {
                let ks = key_splitting_gdof(&GdofParams { eta: 1.0, ..p }).unwrap();
                prop_assert_eq!(rate_splitting_gdof(&p).unwrap(), ks);
            }

            #[test]
            fn sum_face_redundant_without_key_split(p in params()) {
                let q = GdofParams { eta: 0.0, ..p };
                let with = key_splitting_gdof(&q).unwrap();
                let without = intersect_halfplanes(
                    &[HalfPlane::r1_at_most(1.0), HalfPlane::r2_at_most(1.0 - q.alpha)],
                    RegionMode::Gdof,
                ).unwrap();
                prop_assert!(with.approx_eq(&without, 1e-12));
                let d2 = key_wc_boxes(&GdofParams { gamma: 0.0, ..q }).unwrap();
                prop_assert!(with.approx_eq(&d2[1], 1e-12));
            }

            #[test]
            fn regions_grow_with_key(p in params(), d in 0.0f64..1.0) {
                let q = GdofParams { gamma: p.gamma + d, ..p };
                for s in GdofScheme::ALL {
                    prop_assert!(subset_of(&s.region(&p).unwrap(), &s.region(&q).unwrap(), 1e-12));
                }
            }

            #[test]
            fn enough_key_reaches_no_secrecy_region(a in 0.0f64..=1.0, extra in 0.0f64..1.0) {
                let p = GdofParams::new(a, a + extra, 1.0).unwrap();
                prop_assert!(key_splitting_gdof(&p).unwrap().approx_eq(&no_secrecy_gdof(a).unwrap(), 1e-12));
            }

            #[test]
            fn regions_are_convex_down_closed_and_hull_stable(p in params()) {
                for s in GdofScheme::ALL {
                    let r = s.region(&p).unwrap();
                    prop_assert!(r.is_convex());
                    prop_assert!(r.is_down_closed(1e-12));
                    prop_assert_eq!(&hull(r.vertices(), RegionMode::Gdof).unwrap(), &r);
                }
            }
        }
    }
}
