//! Achievable secrecy-rate regions.
//!
//! Each scheme maps one operating point to three independent caps on `R1`,
//! `R2` and `R1 + R2`. A region is the down-closed convex hull of the
//! polygons obtained over a parameter grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{classify_regime, half_log2, ChannelParams, Regime, SchemeParams};
use crate::error::{check_unit, Error, Result};
use crate::geometry::{hull, monotone_chain, RatePoint, Region, RegionMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConstraints {
    pub r1_cap: f64,
    pub r2_cap: f64,
    /// `None` when the scheme imposes no separate sum-rate constraint.
    pub sum_cap: Option<f64>,
}

impl RateConstraints {
    /// The (at most two) Pareto corners of the constraint polygon.
    pub fn corners(&self) -> [RatePoint; 2] {
        match self.sum_cap {
            None => {
                let p = RatePoint::new(self.r1_cap, self.r2_cap);
                [p, p]
            }
            Some(s) => {
                let a = self.r1_cap.min(s);
                let b = self.r2_cap.min(s - a);
                let c = self.r2_cap.min(s);
                let d = self.r1_cap.min(s - c);
                [RatePoint::new(a, b), RatePoint::new(d, c)]
            }
        }
    }

    pub fn max_sum(&self) -> f64 {
        let box_sum = self.r1_cap + self.r2_cap;
        self.sum_cap.map_or(box_sum, |s| s.min(box_sum))
    }

    pub fn region(&self) -> Region {
        hull(&self.corners(), RegionMode::Rate).expect("caps are non-negative")
    }
}

/// Everything in the key-splitting constraints that does not depend on the
/// key rate or its split. Evaluating these once per power configuration lets
/// a sweep scan the key split without recomputing logarithms.
#[derive(Debug, Clone, Copy)]
struct PowerTerms {
    r1: f64,
    /// Rate sacrificed by stochastic encoding to confuse receiver 1.
    wiretap_penalty: f64,
    common_at_rx1: f64,
    common_at_rx2: f64,
    private_rate: f64,
    mac_sum: f64,
}

impl PowerTerms {
    fn new(ch: &ChannelParams, lambda1: f64, lambda2: f64, beta1: f64, beta2: f64) -> Self {
        let (g11, g22, g21) = (ch.h11 * ch.h11, ch.h22 * ch.h22, ch.h21 * ch.h21);
        let q1 = beta1 * ch.p1;
        let q2 = beta2 * ch.p2;
        let p1m = lambda1 * q1;
        let p1a = (1.0 - lambda1) * q1;
        let p2p = lambda2 * q2;
        let p2c = (1.0 - lambda2) * q2;

        let an_floor = 1.0 + g11 * p1a;
        let n1 = an_floor + g21 * p2p;
        Self {
            r1: half_log2(1.0 + g11 * p1m / n1),
            wiretap_penalty: half_log2(1.0 + g21 * p2p / an_floor),
            common_at_rx1: half_log2(1.0 + g21 * p2c / n1),
            common_at_rx2: half_log2(1.0 + g22 * p2c / (1.0 + g22 * p2p)),
            private_rate: half_log2(1.0 + g22 * p2p),
            mac_sum: half_log2(1.0 + (g11 * p1m + g21 * p2c) / n1),
        }
    }

    fn with_key(&self, eta: f64, rk: f64) -> RateConstraints {
        let common = self.common_at_rx1.min(self.common_at_rx2).min(eta * rk);
        let private = self
            .private_rate
            .min(self.private_rate - self.wiretap_penalty + (1.0 - eta) * rk)
            .max(0.0);
        RateConstraints {
            r1_cap: self.r1,
            r2_cap: common + private,
            sum_cap: Some(self.mac_sum + private),
        }
    }
}

/// Key-rate splitting with superposition coding and artificial noise.
pub fn key_splitting_point(ch: &ChannelParams, sp: &SchemeParams) -> Result<RateConstraints> {
    sp.validate()?;
    Ok(PowerTerms::new(ch, sp.lambda1, sp.lambda2, sp.beta1, sp.beta2).with_key(sp.eta, ch.rk))
}

/// The whole key protects the common confidential message.
pub fn rate_splitting_point(ch: &ChannelParams, sp: &SchemeParams) -> Result<RateConstraints> {
    key_splitting_point(ch, &SchemeParams { eta: 1.0, ..*sp })
}

/// The whole key is folded into wiretap coding; receiver 1 treats user 2 as
/// noise.
pub fn key_as_wiretap_point(ch: &ChannelParams, beta1: f64, beta2: f64) -> Result<RateConstraints> {
    check_unit("beta1", beta1)?;
    check_unit("beta2", beta2)?;
    let (g11, g22, g21) = (ch.h11 * ch.h11, ch.h22 * ch.h22, ch.h21 * ch.h21);
    let q1 = beta1 * ch.p1;
    let q2 = beta2 * ch.p2;
    let legit = half_log2(1.0 + g22 * q2);
    let leak = half_log2(1.0 + g21 * q2);
    Ok(RateConstraints {
        r1_cap: half_log2(1.0 + g11 * q1 / (1.0 + g21 * q2)),
        r2_cap: legit.min(legit - leak + ch.rk).max(0.0),
        sum_cap: None,
    })
}

/// The key is a one-time pad on user 2's message; receiver 1 treats
/// interference as noise.
pub fn one_time_pad_point(ch: &ChannelParams, beta1: f64, beta2: f64) -> Result<RateConstraints> {
    check_unit("beta1", beta1)?;
    check_unit("beta2", beta2)?;
    let (g11, g22, g21) = (ch.h11 * ch.h11, ch.h22 * ch.h22, ch.h21 * ch.h21);
    let q1 = beta1 * ch.p1;
    let q2 = beta2 * ch.p2;
    Ok(RateConstraints {
        r1_cap: half_log2(1.0 + g11 * q1 / (1.0 + g21 * q2)),
        r2_cap: ch.rk.min(half_log2(1.0 + g22 * q2)),
        sum_cap: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    /// Key-rate splitting with artificial noise; all five knobs swept.
    #[serde(rename = "key-splitting-an")]
    KeySplitting,
    /// Key-rate splitting pinned at `eta = 1`.
    #[serde(rename = "rate-splitting-an")]
    RateSplitting,
    /// `eta = 1` and `lambda1 = 1`: no artificial noise.
    #[serde(rename = "rate-splitting-no-an")]
    RateSplittingNoAn,
    #[serde(rename = "key-as-wc")]
    KeyAsWiretap,
    #[serde(rename = "otp")]
    OneTimePad,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::KeySplitting,
        Scheme::RateSplitting,
        Scheme::RateSplittingNoAn,
        Scheme::KeyAsWiretap,
        Scheme::OneTimePad,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Scheme::KeySplitting => "key-splitting-an",
            Scheme::RateSplitting => "rate-splitting-an",
            Scheme::RateSplittingNoAn => "rate-splitting-no-an",
            Scheme::KeyAsWiretap => "key-as-wc",
            Scheme::OneTimePad => "otp",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scheme::KeySplitting => "Key splitting (with AN)",
            Scheme::RateSplitting => "Rate splitting (with AN)",
            Scheme::RateSplittingNoAn => "Rate splitting (w/o AN)",
            Scheme::KeyAsWiretap => "Key as a part of WC",
            Scheme::OneTimePad => "Key as a one time pad",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.slug() == s)
    }

    /// Wiretap coding of the private message without artificial noise needs
    /// the cross link to be no stronger than the direct link.
    pub fn applicable(self, regime: Regime) -> bool {
        match self {
            Scheme::RateSplittingNoAn | Scheme::KeyAsWiretap => regime == Regime::WeakModerate,
            _ => true,
        }
    }

    pub fn applicable_to(self, ch: &ChannelParams) -> bool {
        self.applicable(classify_regime(ch))
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.slug())
    }
}

/// Per-parameter resolutions of a uniform sweep over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_lambda1: usize,
    pub n_lambda2: usize,
    pub n_beta1: usize,
    pub n_beta2: usize,
    pub n_eta: usize,
    /// Also sample `lambda2` at the split that puts the private message at
    /// the noise level of receiver 1.
    pub include_gdof_split: bool,
    /// Pin both power-control fractions at 1.
    pub full_power: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_lambda1: 33,
            n_lambda2: 33,
            n_beta1: 33,
            n_beta2: 33,
            n_eta: 21,
            include_gdof_split: true,
            full_power: false,
        }
    }
}

impl GridSpec {
    pub fn uniform(n: usize) -> Self {
        Self {
            n_lambda1: n,
            n_lambda2: n,
            n_beta1: n,
            n_beta2: n,
            n_eta: n,
            ..Self::default()
        }
    }

    pub fn validate_for(&self, scheme: Scheme) -> Result<()> {
        let mut axes: Vec<(&'static str, usize)> = Vec::new();
        if !self.full_power {
            axes.push(("beta1", self.n_beta1));
            axes.push(("beta2", self.n_beta2));
        }
        match scheme {
            Scheme::KeySplitting => {
                axes.extend([("lambda1", self.n_lambda1), ("lambda2", self.n_lambda2), ("eta", self.n_eta)])
            }
            Scheme::RateSplitting => {
                axes.extend([("lambda1", self.n_lambda1), ("lambda2", self.n_lambda2)])
            }
            Scheme::RateSplittingNoAn => axes.push(("lambda2", self.n_lambda2)),
            Scheme::KeyAsWiretap | Scheme::OneTimePad => {}
        }
        match axes.into_iter().find(|&(_, n)| n < 2) {
            Some((axis, points)) => Err(Error::GridTooCoarse { axis, points }),
            None => Ok(()),
        }
    }
}

fn linspace01(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// Fraction of Tx2's power that makes the private message arrive at
/// receiver 1 at the noise level: `min(p2, 1/h21^2) / p2`.
pub fn gdof_private_split(ch: &ChannelParams) -> f64 {
    if ch.p2 <= 0.0 {
        return 1.0;
    }
    let g21 = ch.h21 * ch.h21;
    (1.0 / g21).min(ch.p2) / ch.p2
}

struct Axes {
    lambda1: Vec<f64>,
    lambda2: Vec<f64>,
    beta1: Vec<f64>,
    beta2: Vec<f64>,
    eta: Vec<f64>,
}

impl Axes {
    fn new(ch: &ChannelParams, scheme: Scheme, grid: &GridSpec) -> Self {
        let beta = |n| if grid.full_power { vec![1.0] } else { linspace01(n) };
        let mut lambda2 = linspace01(grid.n_lambda2);
        if grid.include_gdof_split {
            let s = gdof_private_split(ch);
            if !lambda2.contains(&s) {
                lambda2.push(s);
                lambda2.sort_by(f64::total_cmp);
            }
        }
        let (lambda1, eta) = match scheme {
            Scheme::KeySplitting => (linspace01(grid.n_lambda1), linspace01(grid.n_eta)),
            Scheme::RateSplitting => (linspace01(grid.n_lambda1), vec![1.0]),
            Scheme::RateSplittingNoAn => (vec![1.0], vec![1.0]),
            Scheme::KeyAsWiretap | Scheme::OneTimePad => (vec![1.0], vec![0.0]),
        };
        Self {
            lambda1,
            lambda2,
            beta1: beta(grid.n_beta1),
            beta2: beta(grid.n_beta2),
            eta,
        }
    }

    /// Number of independent chunks the sweep is split into.
    fn chunks(&self, scheme: Scheme) -> usize {
        match scheme {
            Scheme::KeySplitting | Scheme::RateSplitting => self.lambda1.len(),
            Scheme::RateSplittingNoAn => self.lambda2.len(),
            Scheme::KeyAsWiretap | Scheme::OneTimePad => self.beta1.len(),
        }
    }

    /// Visits every grid point of chunk `k` in a fixed order.
    fn visit_chunk(
        &self,
        ch: &ChannelParams,
        scheme: Scheme,
        k: usize,
        mut f: impl FnMut(RateConstraints),
    ) {
        match scheme {
            Scheme::KeySplitting | Scheme::RateSplitting | Scheme::RateSplittingNoAn => {
                let (l1s, l2s) = if scheme == Scheme::RateSplittingNoAn {
                    (&self.lambda1[..], &self.lambda2[k..=k])
                } else {
                    (&self.lambda1[k..=k], &self.lambda2[..])
                };
                for &l1 in l1s {
                    for &l2 in l2s {
                        for &b1 in &self.beta1 {
                            for &b2 in &self.beta2 {
                                let terms = PowerTerms::new(ch, l1, l2, b1, b2);
                                for &eta in &self.eta {
                                    f(terms.with_key(eta, ch.rk));
                                }
                            }
                        }
                    }
                }
            }
            Scheme::KeyAsWiretap | Scheme::OneTimePad => {
                let b1 = self.beta1[k];
                for &b2 in &self.beta2 {
                    let rc = if scheme == Scheme::KeyAsWiretap {
                        key_as_wiretap_point(ch, b1, b2)
                    } else {
                        one_time_pad_point(ch, b1, b2)
                    };
                    f(rc.expect("grid values lie in [0, 1]"));
                }
            }
        }
    }
}

/// Drops every point that lies strictly inside the down-closed polygon of a
/// few extreme points, then hulls what is left.
fn reduce(points: Vec<RatePoint>) -> Vec<RatePoint> {
    const DIRECTIONS: usize = 9;
    if points.len() < 64 {
        return monotone_chain(points);
    }
    let dirs: Vec<(f64, f64)> = (0..DIRECTIONS)
        .map(|k| {
            let t = std::f64::consts::FRAC_PI_2 * k as f64 / (DIRECTIONS - 1) as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let mut best = vec![(f64::NEG_INFINITY, RatePoint::ORIGIN); DIRECTIONS];
    for &p in &points {
        for (slot, &(c, s)) in best.iter_mut().zip(&dirs) {
            let v = c * p.r1 + s * p.r2;
            if v > slot.0 {
                *slot = (v, p);
            }
        }
    }
    let mut seed: Vec<RatePoint> = vec![RatePoint::ORIGIN];
    for &(_, p) in &best {
        seed.extend([p, RatePoint::new(p.r1, 0.0), RatePoint::new(0.0, p.r2)]);
    }
    let inner = Region::from_ccw_vertices(monotone_chain(seed.clone()), RegionMode::Rate);
    let planes = inner.halfplanes();
    let mut keep = seed;
    keep.extend(points.into_iter().filter(|&p| {
        planes
            .iter()
            .any(|h| h.slack(p) <= 1e-9 * (1.0 + h.c.abs()))
    }));
    monotone_chain(keep)
}

/// Achievable region of `scheme` on `ch`: convex hull of the union of the
/// per-point polygons over the scheme's parameter grid.
///
/// Chunks are reduced independently (possibly in parallel) and merged in
/// grid order, so the output does not depend on the thread count.
pub fn sweep_region(ch: &ChannelParams, scheme: Scheme, grid: &GridSpec) -> Result<Region> {
    ch.validate()?;
    grid.validate_for(scheme)?;
    let axes = Axes::new(ch, scheme, grid);
    let partial: Vec<Vec<RatePoint>> = (0..axes.chunks(scheme))
        .into_par_iter()
        .map(|k| {
            let mut pts = Vec::new();
            axes.visit_chunk(ch, scheme, k, |rc| pts.extend(rc.corners()));
            reduce(pts)
        })
        .collect();
    let merged: Vec<RatePoint> = partial.into_iter().flatten().collect();
    hull(&merged, RegionMode::Rate)
}

/// Largest `R1 + R2` reachable by a single grid point of `scheme`.
pub fn max_sum_rate(ch: &ChannelParams, scheme: Scheme, grid: &GridSpec) -> Result<f64> {
    ch.validate()?;
    grid.validate_for(scheme)?;
    let axes = Axes::new(ch, scheme, grid);
    let best = (0..axes.chunks(scheme))
        .into_par_iter()
        .map(|k| {
            let mut best = 0.0f64;
            axes.visit_chunk(ch, scheme, k, |rc| best = best.max(rc.max_sum()));
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}
