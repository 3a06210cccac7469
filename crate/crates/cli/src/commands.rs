use serde_json::json;
use zic_core::verify::{run_battery, VerifyConfig, VerifyReport};
use zic_core::{
    classify_regime, intersect_halfplanes, key_wc_boxes, max_sum_rate, no_secrecy_gdof, otp_boxes,
    outer_bounds, sweep_region, ChannelParams, GdofParams, GdofScheme, GridSpec, HalfPlane, Regime, Region,
    RegionMode, Scheme,
};

use crate::config::{Bounds, Scenario, SweepAxis};
use crate::svg::{curves_from_csv, plot, polygon_from_csv};
use crate::table::{cell, fmt_num, Csv};
use crate::{CliError, Output};

/// Label used wherever the genie-aided non-secrecy bound shows up.
pub const NONSECRECY_NOTE: &str = "external, non-paper: genie-aided Z-IC sum bound without secrecy";

fn region_csv(label: &str, region: &Region, x: &str, y: &str) -> String {
    let mut csv = Csv::new(&["scheme", x, y]);
    for v in region.vertices() {
        csv.row(&[label.to_owned(), fmt_num(v.r1), fmt_num(v.r2)]);
    }
    csv.finish()
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::WeakModerate => "weak-moderate",
        Regime::High => "high",
    }
}

/// Outer region built from the selected bounds. `None` when no bound is
/// selected.
pub fn selected_outer(ch: &ChannelParams, bounds: &Bounds) -> Result<Option<Region>, CliError> {
    if !bounds.any() {
        return Ok(None);
    }
    let ob = outer_bounds(ch, bounds.nonsecrecy);
    let mut planes = vec![HalfPlane::r1_at_most(ob.r1_p2p)];
    let r2 = [bounds.thm4.then_some(ob.r2_thm4), bounds.p2p.then_some(ob.r2_p2p)]
        .into_iter()
        .flatten()
        .reduce(f64::min);
    if let Some(r2) = r2 {
        planes.push(HalfPlane::r2_at_most(r2));
    }
    let sums = [ob.sum_thm3.filter(|_| bounds.thm3), ob.sum_nonsecrecy];
    if let Some(s) = sums.into_iter().flatten().reduce(f64::min) {
        planes.push(HalfPlane::sum_at_most(s));
    }
    intersect_halfplanes(&planes, RegionMode::Rate)
        .map(Some)
        .map_err(|e| CliError::Config(format!("selected bounds do not close the region: {e}")))
}

/// Achievable regions of the selected schemes, the outer region and a
/// metadata sidecar naming suppressed schemes.
pub fn cmd_region(sc: &Scenario) -> Result<Output, CliError> {
    let ch = &sc.channel;
    let regime = classify_regime(ch);
    let mut out = Output::default();
    let mut emitted = Vec::new();
    let mut suppressed = Vec::new();
    let mut texts = Vec::new();

    for &scheme in &sc.schemes {
        sc.grid.validate_for(scheme)?;
        if !scheme.applicable(regime) {
            let reason = "wiretap coding of the private message needs |h21| <= |h22|";
            out.warnings.push(format!("{scheme}: suppressed in the {} regime ({reason})", regime_name(regime)));
            suppressed.push(json!({ "scheme": scheme.slug(), "label": scheme.label(), "reason": reason }));
            continue;
        }
        let region = sweep_region(ch, scheme, &sc.grid)?;
        let text = region_csv(scheme.slug(), &region, "R1", "R2");
        emitted.push(json!({ "scheme": scheme.slug(), "label": scheme.label(), "file": format!("{scheme}.csv") }));
        texts.push(text.clone());
        if sc.outputs.csv {
            out.push(format!("{scheme}.csv"), text);
        }
    }

    let ob = outer_bounds(ch, sc.bounds.nonsecrecy);
    if let Some(outer) = selected_outer(ch, &sc.bounds)? {
        let text = region_csv("outer", &outer, "R1", "R2");
        texts.push(text.clone());
        if sc.outputs.csv {
            out.push("outer.csv", text);
        }
    }

    let meta = json!({
        "command": "region",
        "channel": ch,
        "regime": regime_name(regime),
        "grid": sc.grid,
        "schemes": emitted,
        "suppressed": suppressed,
        "bounds": {
            "selected": { "thm3": sc.bounds.thm3, "thm4": sc.bounds.thm4, "p2p": sc.bounds.p2p, "nonsecrecy": sc.bounds.nonsecrecy },
            "values": ob,
            "nonsecrecy_note": sc.bounds.nonsecrecy.then_some(NONSECRECY_NOTE),
        },
    });
    out.push("meta.json", serde_json::to_string_pretty(&meta).expect("json values serialize") + "\n");

    if sc.outputs.svg {
        let mut series: Vec<_> = texts.iter().filter_map(|t| polygon_from_csv(t, "R1", "R2")).collect();
        for s in series.iter_mut().filter(|s| s.label == "outer") {
            s.dashed = true;
        }
        let title = format!("h21 = {}, P1 = {}, P2 = {}, RK = {}", ch.h21, ch.p1, ch.p2, ch.rk);
        out.push("region.svg", plot(&title, "R1 (bits/use)", "R2 (bits/use)", &series));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumrateSpec {
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Fixed interference exponent on the key-rate axis.
    pub alpha: f64,
}

impl SumrateSpec {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if self.steps == 0 || !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Config("sweep needs finite bounds and at least one step".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.from]);
        }
        let n = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| if i + 1 == self.steps { self.to } else { self.from + (self.to - self.from) * i as f64 / n })
            .collect())
    }
}

/// Channel with the cross gain set so that `log(h21^2 p2) / log(h22^2 p2) = alpha`.
pub fn channel_at_alpha(base: &ChannelParams, alpha: f64, rk: f64) -> Result<ChannelParams, CliError> {
    let snr = base.snr2();
    if snr <= 1.0 {
        return Err(CliError::Domain(zic_core::Error::Domain {
            name: "h22^2 p2",
            value: snr,
            domain: "(1, inf) for an interference exponent",
        }));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(CliError::Domain(zic_core::Error::Domain {
            name: "alpha",
            value: alpha,
            domain: "[0, inf)",
        }));
    }
    let h21 = (snr.powf(alpha) / base.p2).sqrt();
    Ok(ChannelParams::new(base.h11, base.h22, h21, base.p1, base.p2, rk)?)
}

/// Maximum achievable sum rate per scheme at full power along one axis.
pub fn cmd_sumrate(sc: &Scenario, spec: &SumrateSpec) -> Result<Output, CliError> {
    let grid = GridSpec {
        full_power: true,
        ..sc.grid
    };
    for &s in &sc.schemes {
        grid.validate_for(s)?;
    }
    let mut header = vec!["x".to_owned()];
    header.extend(sc.schemes.iter().map(|s| s.slug().to_owned()));
    header.push("outer".into());
    let mut csv = Csv::new(&header);

    for x in spec.points()? {
        let ch = match spec.axis {
            SweepAxis::Alpha => channel_at_alpha(&sc.channel, x, sc.channel.rk)?,
            SweepAxis::Rk => channel_at_alpha(&sc.channel, spec.alpha, x)?,
        };
        let regime = classify_regime(&ch);
        let mut row = vec![fmt_num(x)];
        for &s in &sc.schemes {
            let v = if s.applicable(regime) { Some(max_sum_rate(&ch, s, &grid)?) } else { None };
            row.push(cell(v));
        }
        row.push(cell(selected_outer(&ch, &sc.bounds)?.map(|r| r.max_sum())));
        csv.row(&row);
    }

    let axis = match spec.axis {
        SweepAxis::Alpha => "alpha",
        SweepAxis::Rk => "rk",
    };
    let text = csv.finish();
    let mut out = Output::default();
    let meta = json!({
        "command": "sumrate",
        "axis": axis,
        "x": if axis == "alpha" { "log(h21^2 p2) / log(h22^2 p2)" } else { "key rate RK (bits/use)" },
        "fixed_alpha": (spec.axis == SweepAxis::Rk).then_some(spec.alpha),
        "base_channel": sc.channel,
        "grid": grid,
        "schemes": sc.schemes.iter().map(|s| json!({ "scheme": s.slug(), "label": s.label() })).collect::<Vec<_>>(),
        "empty_cell": "scheme not applicable at this point",
        "nonsecrecy_note": sc.bounds.nonsecrecy.then_some(NONSECRECY_NOTE),
    });
    if sc.outputs.svg {
        let xlabel = if axis == "alpha" { "alpha" } else { "RK (bits/use)" };
        let mut series = curves_from_csv(&text);
        for s in series.iter_mut().filter(|s| s.label == "outer") {
            s.dashed = true;
        }
        out.push(format!("sumrate-{axis}.svg"), plot("Sum rate", xlabel, "R1 + R2 (bits/use)", &series));
    }
    out.artifacts.insert(
        0,
        crate::Artifact {
            name: format!("sumrate-{axis}.csv"),
            contents: text,
        },
    );
    out.push(format!("sumrate-{axis}.json"), serde_json::to_string_pretty(&meta).expect("json") + "\n");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdofSpec {
    pub params: GdofParams,
    pub schemes: Vec<GdofScheme>,
    pub svg: bool,
}

/// GDOF polytopes, the no-secrecy reference and the raw time-sharing boxes.
pub fn cmd_gdof(spec: &GdofSpec) -> Result<Output, CliError> {
    let gp = &spec.params;
    gp.validate()?;
    let mut out = Output::default();
    let mut texts = Vec::new();
    for &s in &spec.schemes {
        let text = region_csv(s.slug(), &s.region(gp)?, "d1", "d2");
        texts.push(text.clone());
        out.push(format!("gdof-{}.csv", s.slug()), text);
    }
    let reference = region_csv("no-secrecy", &no_secrecy_gdof(gp.alpha)?, "d1", "d2");
    texts.push(reference.clone());
    out.push("gdof-no-secrecy.csv", reference);

    for (name, boxes) in [("key-as-wc", key_wc_boxes(gp)?), ("otp", otp_boxes(gp)?)] {
        let mut csv = Csv::new(&["box", "d1", "d2"]);
        for (label, b) in ["fixed-split", "time-sharing"].iter().zip(&boxes) {
            for v in b.vertices() {
                csv.row(&[label.to_string(), fmt_num(v.r1), fmt_num(v.r2)]);
            }
        }
        out.push(format!("gdof-{name}-boxes.csv"), csv.finish());
    }

    if spec.svg {
        let mut series: Vec<_> = texts.iter().filter_map(|t| polygon_from_csv(t, "d1", "d2")).collect();
        for s in series.iter_mut().filter(|s| s.label == "no-secrecy") {
            s.dashed = true;
        }
        let title = format!("GDOF regions, alpha = {}, gamma = {}", gp.alpha, gp.gamma);
        out.push("gdof.svg", plot(&title, "d1", "d2", &series));
    }
    Ok(out)
}

/// Runs the core invariant battery plus the report-level checks.
pub fn cmd_verify(cfg: &VerifyConfig) -> (Output, VerifyReport) {
    let mut report = run_battery(cfg);

    let sc = Scenario {
        channel: ChannelParams::symmetric(1.0, 0.6, 100.0, 0.2).expect("valid"),
        grid: GridSpec::uniform(5),
        schemes: Scheme::ALL.to_vec(),
        bounds: Bounds::default(),
        outputs: crate::config::Outputs { csv: true, svg: true },
    };
    let scenario = "h21=0.6 p=100 rk=0.2 grid=5".to_owned();
    match (cmd_region(&sc), cmd_region(&sc)) {
        (Ok(a), Ok(b)) => {
            let same = a == b;
            report.record("region-output-deterministic", "cli-reporting", scenario.clone(), if same { 0.0 } else { -1.0 });
            let svg = a.get("region.svg").unwrap_or_default();
            let csv_vertices: usize = a
                .artifacts
                .iter()
                .filter(|x| x.name.ends_with(".csv"))
                .map(|x| x.contents.lines().count() - 1)
                .sum();
            let svg_vertices: usize = svg
                .lines()
                .filter(|l| l.starts_with("<polygon"))
                .map(|l| l.split("points=\"").nth(1).map_or(0, |p| p.split('"').next().unwrap_or("").split(' ').count()))
                .sum();
            let ok = csv_vertices == svg_vertices;
            report.record("svg-drawn-from-csv", "cli-reporting", scenario, if ok { 0.0 } else { -1.0 });
        }
        _ => report.record("region-output-deterministic", "cli-reporting", scenario, -1.0),
    }

    let mut out = Output::default();
    out.push("verify.json", serde_json::to_string_pretty(&report).expect("json") + "\n");
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Outputs;
    use zic_core::composite_outer_region;

    fn scenario(h21: f64, rk: f64, grid: usize) -> Scenario {
        Scenario {
            channel: ChannelParams::symmetric(1.0, h21, 100.0, rk).unwrap(),
            grid: GridSpec::uniform(grid),
            schemes: Scheme::ALL.to_vec(),
            bounds: Bounds::default(),
            outputs: Outputs { csv: true, svg: true },
        }
    }

    #[test]
    fn default_selection_is_the_composite_region() {
        let sc = scenario(0.6, 1.0, 3);
        let r = selected_outer(&sc.channel, &sc.bounds).unwrap().unwrap();
        assert_eq!(r, composite_outer_region(&sc.channel, false));
        let none = Bounds { thm3: false, thm4: false, p2p: false, nonsecrecy: false };
        assert!(selected_outer(&sc.channel, &none).unwrap().is_none());
        let sum_only = Bounds { thm3: true, thm4: false, p2p: false, nonsecrecy: false };
        let r = selected_outer(&sc.channel, &sum_only).unwrap().unwrap();
        assert!((r.max_sum() - composite_outer_region(&sc.channel, false).max_sum()).abs() < 1e-12);
    }

    #[test]
    fn region_emits_one_csv_per_applicable_scheme() {
        let out = cmd_region(&scenario(0.6, 0.2, 5)).unwrap();
        for s in Scheme::ALL {
            let text = out.get(&format!("{s}.csv")).unwrap();
            assert!(text.starts_with("scheme,R1,R2\n"));
        }
        assert!(out.get("outer.csv").is_some());
        assert!(out.get("region.svg").is_some());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn high_interference_suppresses_wiretap_schemes() {
        let out = cmd_region(&scenario(1.2, 1.0, 5)).unwrap();
        assert!(out.get("key-as-wc.csv").is_none());
        assert!(out.get("rate-splitting-no-an.csv").is_none());
        assert!(out.get("key-splitting-an.csv").is_some());
        assert!(out.get("otp.csv").is_some());
        assert_eq!(out.warnings.len(), 2);
        let meta: serde_json::Value = serde_json::from_str(out.get("meta.json").unwrap()).unwrap();
        assert_eq!(meta["suppressed"].as_array().unwrap().len(), 2);
        assert_eq!(meta["regime"], "high");
    }

    #[test]
    fn otp_without_key_stays_on_the_axis() {
        let mut sc = scenario(0.6, 0.0, 5);
        sc.schemes = vec![Scheme::OneTimePad];
        let out = cmd_region(&sc).unwrap();
        let csv = crate::table::Parsed::parse(out.get("otp.csv").unwrap());
        assert!((0..csv.rows.len()).all(|r| csv.number(r, 2) == Some(0.0)));
    }

    #[test]
    fn sumrate_leaves_inapplicable_cells_empty() {
        let mut sc = scenario(0.6, 0.4, 5);
        sc.channel = ChannelParams::symmetric(1.0, 1.0, 10.0, 0.4).unwrap();
        sc.schemes = vec![Scheme::KeySplitting, Scheme::KeyAsWiretap, Scheme::OneTimePad];
        let spec = SumrateSpec { axis: SweepAxis::Alpha, from: 0.0, to: 1.2, steps: 7, alpha: 0.6 };
        let out = cmd_sumrate(&sc, &spec).unwrap();
        let csv = crate::table::Parsed::parse(out.get("sumrate-alpha.csv").unwrap());
        assert_eq!(csv.header, ["x", "key-splitting-an", "key-as-wc", "otp", "outer"]);
        let last = csv.rows.len() - 1;
        assert_eq!(csv.number(last, 0), Some(1.2));
        assert_eq!(csv.number(last, 2), None);
        assert!(csv.number(last, 1).is_some());
        assert!(csv.number(0, 2).is_some());
    }

    #[test]
    fn alpha_channel_has_requested_exponent() {
        let base = ChannelParams::symmetric(1.0, 0.5, 10.0, 0.4).unwrap();
        for a in [0.0, 0.3, 1.0, 1.2] {
            let ch = channel_at_alpha(&base, a, 0.4).unwrap();
            assert!((ch.inr1().log2() / ch.snr2().log2() - a).abs() < 1e-12);
        }
        let weak = ChannelParams::symmetric(1.0, 0.5, 1.0, 0.4).unwrap();
        assert!(matches!(channel_at_alpha(&weak, 0.5, 0.0), Err(CliError::Domain(_))));
    }

    #[test]
    fn gdof_rejects_strong_interference() {
        let spec = GdofSpec {
            params: GdofParams { alpha: 1.1, gamma: 0.1, eta: 1.0 },
            schemes: GdofScheme::ALL.to_vec(),
            svg: false,
        };
        assert!(matches!(cmd_gdof(&spec), Err(CliError::Domain(_))));
    }

    #[test]
    fn verify_passes_and_names_cli_checks() {
        let (out, rep) = cmd_verify(&VerifyConfig { channels: 4, ..VerifyConfig::default() });
        assert!(rep.passed, "{:#?}", rep.failures().collect::<Vec<_>>());
        assert!(rep.invariants.iter().any(|i| i.name == "svg-drawn-from-csv"));
        assert!(out.get("verify.json").is_some());
    }
}
