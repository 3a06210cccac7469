//! Seeded invariant battery covering every module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::achievable::{
    key_as_wiretap_point, key_splitting_point, one_time_pad_point, rate_splitting_point, sweep_region, GridSpec,
    Scheme,
};
use crate::channel::{classify_regime, ChannelParams, Regime, SchemeParams};
use crate::geometry::{contains, hull, intersect_halfplanes, subset_of, HalfPlane, RatePoint, Region, RegionMode};
use crate::outer::{outer_bounds, r2_outer_high, sum_rate_outer, sum_rate_outer_no_key, sum_rate_outer_symmetric};
use crate::sgdof::{
    gdof_convergence_check, key_splitting_gdof, key_wc_boxes, no_secrecy_gdof, rate_splitting_gdof, GdofParams,
    GdofScheme,
};

pub const DEFAULT_SEED: u64 = 0x5eed_2c0d_e000_0001;

/// Containment assertions across modules use this slack.
pub const CONTAINMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random channels per randomized invariant.
    pub channels: usize,
    pub grid: GridSpec,
    /// Test fixture: shrinks the sum-rate outer bound by one bit so the
    /// battery must fail.
    pub corrupt_sum_bound: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            channels: 16,
            grid: GridSpec::uniform(5),
            corrupt_sum_bound: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub name: String,
    pub module: String,
    pub scenario: String,
    pub passed: bool,
    /// Signed slack: non-negative iff the invariant holds.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub invariants: Vec<InvariantResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            invariants: Vec::new(),
            passed: true,
        }
    }

    /// Records one check. NaN margins count as failures.
    pub fn record(&mut self, name: &str, module: &str, scenario: String, margin: f64) {
        let passed = margin >= 0.0;
        self.passed &= passed;
        self.invariants.push(InvariantResult {
            name: name.to_owned(),
            module: module.to_owned(),
            scenario,
            passed,
            margin: if margin.is_nan() { f64::NEG_INFINITY } else { margin },
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.invariants.iter().filter(|r| !r.passed)
    }
}

fn scenario(ch: &ChannelParams) -> String {
    format!(
        "h11={} h22={} h21={} p1={} p2={} rk={}",
        ch.h11, ch.h22, ch.h21, ch.p1, ch.p2, ch.rk
    )
}

/// Draws a channel from the test box with `snr2 > inr1`.
pub fn random_weak_channel(rng: &mut impl Rng) -> ChannelParams {
    loop {
        let ch = random_channel(rng);
        if ch.snr2() > ch.inr1() {
            return ch;
        }
    }
}

/// Gains in `[0.1, 2]`, powers in `[1, 1000]`, key rate in `[0, 3]`.
pub fn random_channel(rng: &mut impl Rng) -> ChannelParams {
    ChannelParams::new(
        rng.gen_range(0.1..=2.0),
        rng.gen_range(0.1..=2.0),
        rng.gen_range(0.1..=2.0),
        rng.gen_range(1.0..=1000.0),
        rng.gen_range(1.0..=1000.0),
        rng.gen_range(0.0..=3.0),
    )
    .expect("sampling box is inside the domain")
}

fn random_knobs(rng: &mut impl Rng) -> SchemeParams {
    SchemeParams::new(rng.gen(), rng.gen(), rng.gen(), rng.gen(), rng.gen()).expect("unit samples")
}

/// Worst signed slack of `inner`'s vertices against `outer`'s half-planes.
pub fn containment_margin(inner: &Region, outer: &Region, tol: f64) -> f64 {
    inner
        .vertices()
        .iter()
        .flat_map(|&v| outer.halfplanes().iter().map(move |h| h.slack(v) + tol))
        .fold(f64::INFINITY, f64::min)
}

fn eq_margin(a: f64, b: f64, tol: f64) -> f64 {
    tol - (a - b).abs()
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        -1.0
    }
}

pub fn run_battery(cfg: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = VerifyReport::new(cfg.seed);
    let channels: Vec<ChannelParams> = (0..cfg.channels).map(|_| random_weak_channel(&mut rng)).collect();
    let mixed: Vec<ChannelParams> = (0..cfg.channels).map(|_| random_channel(&mut rng)).collect();

    channel_invariants(&mut report, &mixed);
    achievable_invariants(&mut report, &mut rng, &mixed, &cfg.grid);
    outer_invariants(&mut report, &channels, &cfg.grid, cfg.corrupt_sum_bound);
    geometry_invariants(&mut report, &mut rng);
    sgdof_invariants(&mut report, &mut rng, cfg.channels);
    report
}

fn channel_invariants(report: &mut VerifyReport, mixed: &[ChannelParams]) {
    const M: &str = "channel-model";
    for ch in mixed {
        let doubled = ChannelParams { p2: 2.0 * ch.p2, ..*ch };
        let err = (doubled.snr2() - 2.0 * ch.snr2()).abs() + (doubled.inr1() - 2.0 * ch.inr1()).abs();
        report.record("snr-inr-linear-in-power", M, scenario(ch), 1e-9 * (1.0 + ch.snr2() + ch.inr1()) - err);
        let weak = ch.h21.abs() <= ch.h22.abs();
        let got = classify_regime(ch) == Regime::WeakModerate;
        report.record("regime-follows-gain-order", M, scenario(ch), flag(weak == got));
    }
}

fn achievable_invariants(report: &mut VerifyReport, rng: &mut ChaCha8Rng, mixed: &[ChannelParams], grid: &GridSpec) {
    const M: &str = "achievable-schemes";
    for ch in mixed {
        let sp = random_knobs(rng);
        let extra = rng.gen_range(0.0..2.0);
        let up = ch.with_rk(ch.rk + extra);
        let caps = |c: &ChannelParams| {
            let ks = key_splitting_point(c, &sp).expect("valid knobs");
            let wc = key_as_wiretap_point(c, sp.beta1, sp.beta2).expect("valid knobs");
            let otp = one_time_pad_point(c, sp.beta1, sp.beta2).expect("valid knobs");
            [ks.r1_cap, ks.r2_cap, ks.sum_cap.unwrap_or(0.0), wc.r1_cap, wc.r2_cap, otp.r1_cap, otp.r2_cap]
        };
        let (lo, hi) = (caps(ch), caps(&up));
        let nonneg = lo.iter().copied().fold(f64::INFINITY, f64::min);
        report.record("caps-nonnegative", M, scenario(ch), nonneg);
        let mono = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
        report.record("caps-monotone-in-key-rate", M, scenario(ch), mono);

        let ks = key_splitting_point(ch, &SchemeParams::new(1.0, 1.0, sp.beta1, sp.beta2, 0.0).expect("unit"))
            .expect("valid knobs");
        let wc = key_as_wiretap_point(ch, sp.beta1, sp.beta2).expect("valid knobs");
        report.record(
            "key-splitting-slice-equals-key-as-wc",
            M,
            scenario(ch),
            flag(ks.r1_cap == wc.r1_cap && ks.r2_cap == wc.r2_cap),
        );
        let rs = rate_splitting_point(ch, &sp).expect("valid knobs");
        let ks1 = key_splitting_point(ch, &SchemeParams { eta: 1.0, ..sp }).expect("valid knobs");
        report.record("rate-splitting-is-eta-one", M, scenario(ch), flag(rs == ks1));
    }

    for ch in mixed.iter().take(4) {
        let ks = sweep_region(ch, Scheme::KeySplitting, grid).expect("valid grid");
        for s in [Scheme::RateSplitting, Scheme::RateSplittingNoAn, Scheme::KeyAsWiretap] {
            let r = sweep_region(ch, s, grid).expect("valid grid");
            report.record(
                &format!("{s}-inside-key-splitting"),
                M,
                scenario(ch),
                containment_margin(&r, &ks, CONTAINMENT_TOL),
            );
        }
        let otp = sweep_region(ch, Scheme::OneTimePad, grid).expect("valid grid");
        report.record("otp-rate-below-key-rate", M, scenario(ch), ch.rk - otp.max_r2());
    }
}

fn outer_invariants(report: &mut VerifyReport, channels: &[ChannelParams], grid: &GridSpec, corrupt: bool) {
    const M: &str = "outer-bounds";
    for ch in channels {
        let mut ob = outer_bounds(ch, false);
        if corrupt {
            ob.sum_thm3 = ob.sum_thm3.map(|s| s - 1.0);
        }
        let outer = ob.region();
        for s in Scheme::ALL {
            let r = sweep_region(ch, s, grid).expect("valid grid");
            report.record(
                &format!("{s}-inside-outer-region"),
                M,
                scenario(ch),
                containment_margin(&r, &outer, CONTAINMENT_TOL),
            );
        }
        let d = 0.75;
        let up = ch.with_rk(ch.rk + d);
        report.record(
            "r2-bound-unit-slope-in-key-rate",
            M,
            scenario(ch),
            eq_margin(r2_outer_high(&up) - r2_outer_high(ch), d, 1e-12),
        );
        if let (Some(a), Some(b)) = (sum_rate_outer(ch), sum_rate_outer(&up)) {
            report.record("sum-bound-unit-slope-in-key-rate", M, scenario(ch), eq_margin(b - a, d, 1e-12));
        }
    }

    for &(snr, inr) in &[(100.0, 36.0), (1000.0, 10.0), (50.0, 49.0)] {
        let mut with_key = sum_rate_outer_symmetric(snr, inr, 0.0);
        if corrupt {
            with_key = with_key.map(|s| s - 1.0);
        }
        report.record(
            "sum-bound-without-key-reduces-exactly",
            M,
            format!("snr={snr} inr={inr}"),
            flag(with_key == sum_rate_outer_no_key(snr, inr)),
        );
    }

    let ladder: Vec<f64> = (3..=9).map(|k| 10f64.powi(k)).collect();
    let gaps: Vec<f64> = ladder
        .iter()
        .map(|&inr| {
            let ch = ChannelParams::new(1.0, 1.0, (inr / 100.0).sqrt(), 100.0, 100.0, 1.0).expect("valid");
            r2_outer_high(&ch) - ch.rk
        })
        .collect();
    let mono = gaps.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    report.record("r2-bound-tends-to-key-rate", M, "snr=100 inr=1e3..1e9".into(), mono.min(1e-3 - gaps[6]));
}

fn geometry_invariants(report: &mut VerifyReport, rng: &mut ChaCha8Rng) {
    const M: &str = "region-geometry";
    for trial in 0..16 {
        let n = rng.gen_range(1..24);
        let pts: Vec<RatePoint> = (0..n)
            .map(|_| RatePoint::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
            .collect();
        let sc = format!("trial={trial} points={n}");
        let r = hull(&pts, RegionMode::Rate).expect("non-negative points");
        report.record("hull-convex", M, sc.clone(), flag(r.is_convex()));
        report.record("hull-down-closed", M, sc.clone(), flag(r.is_down_closed(1e-12)));
        let again = hull(r.vertices(), RegionMode::Rate).expect("non-negative points");
        report.record("hull-idempotent", M, sc.clone(), flag(again == r));
        let inside = pts.iter().all(|&p| contains(&r, p, 1e-12));
        report.record("hull-contains-inputs", M, sc.clone(), flag(inside));
        let rebuilt = intersect_halfplanes(r.halfplanes(), RegionMode::Rate);
        let ok = rebuilt.is_ok_and(|x| x.approx_eq(&r, 1e-9));
        report.record("halfplanes-reproduce-vertices", M, sc, flag(ok));
    }
}

fn sgdof_invariants(report: &mut VerifyReport, rng: &mut ChaCha8Rng, n: usize) {
    const M: &str = "sgdof";
    for _ in 0..n {
        let gp = GdofParams::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..2.0), rng.gen()).expect("in domain");
        let sc = format!("alpha={} gamma={} eta={}", gp.alpha, gp.gamma, gp.eta);
        let ks1 = key_splitting_gdof(&GdofParams { eta: 1.0, ..gp }).expect("in domain");
        report.record("rate-splitting-is-eta-one", M, sc.clone(), flag(rate_splitting_gdof(&gp).expect("in domain") == ks1));

        let ks0 = key_splitting_gdof(&GdofParams { eta: 0.0, ..gp }).expect("in domain");
        let no_sum = intersect_halfplanes(
            &[HalfPlane::r1_at_most(1.0), HalfPlane::r2_at_most(1.0 - gp.alpha)],
            RegionMode::Gdof,
        )
        .expect("bounded box");
        let d2 = &key_wc_boxes(&GdofParams { gamma: 0.0, ..gp }).expect("in domain")[1];
        report.record(
            "sum-face-redundant-at-eta-zero",
            M,
            sc.clone(),
            flag(ks0.approx_eq(&no_sum, 1e-12) && ks0.approx_eq(d2, 1e-12)),
        );

        let more = GdofParams { gamma: gp.gamma + 0.25, ..gp };
        for s in GdofScheme::ALL {
            let (a, b) = (s.region(&gp).expect("in domain"), s.region(&more).expect("in domain"));
            report.record(&format!("{}-gdof-grows-with-key", s.slug()), M, sc.clone(), flag(subset_of(&a, &b, 1e-12)));
            let ok = a.is_convex()
                && a.is_down_closed(1e-12)
                && hull(a.vertices(), RegionMode::Gdof).is_ok_and(|h| h == a);
            report.record(&format!("{}-gdof-convex-down-closed", s.slug()), M, sc.clone(), flag(ok));
        }

        let full = GdofParams::new(gp.alpha, gp.alpha + gp.gamma, 1.0).expect("in domain");
        let ok = key_splitting_gdof(&full)
            .expect("in domain")
            .approx_eq(&no_secrecy_gdof(gp.alpha).expect("in domain"), 1e-12);
        report.record("enough-key-gives-no-secrecy-region", M, sc, flag(ok));
    }

    let gp = GdofParams::new(0.5, 0.1, 0.0).expect("in domain");
    let rep = gdof_convergence_check(&[1e2, 1e3, 1e4, 1e6], &gp, GdofScheme::OneTimePad).expect("valid ladder");
    let margin = if rep.monotone { 0.05 - rep.final_gap } else { -1.0 };
    report.record("otp-gdof-convergence", M, "alpha=0.5 gamma=0.1 snr=1e2..1e6".into(), margin);
}
