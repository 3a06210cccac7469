//! A small SVG 1.1 line-plot writer.
//!
//! Series are always read back from emitted CSV text so a picture can never
//! disagree with the numbers next to it.

use std::fmt::Write;

use crate::table::{fmt_num, Parsed};

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// Runs of consecutive points; gaps in the data split a curve.
    pub runs: Vec<Vec<(f64, f64)>>,
    pub closed: bool,
    pub dashed: bool,
}

/// One closed polygon per CSV, taking the label from its first column.
pub fn polygon_from_csv(text: &str, x: &str, y: &str) -> Option<Series> {
    let p = Parsed::parse(text);
    let (xi, yi) = (p.column(x)?, p.column(y)?);
    let pts: Vec<(f64, f64)> = (0..p.rows.len())
        .filter_map(|r| Some((p.number(r, xi)?, p.number(r, yi)?)))
        .collect();
    let label = p.rows.first()?.first()?.clone();
    Some(Series {
        label,
        runs: vec![pts],
        closed: true,
        dashed: false,
    })
}

/// One curve per column after the first, against the first column.
pub fn curves_from_csv(text: &str) -> Vec<Series> {
    let p = Parsed::parse(text);
    (1..p.header.len())
        .map(|c| {
            let mut runs = vec![Vec::new()];
            for r in 0..p.rows.len() {
                match (p.number(r, 0), p.number(r, c)) {
                    (Some(x), Some(y)) => runs.last_mut().expect("non-empty").push((x, y)),
                    _ if !runs.last().expect("non-empty").is_empty() => runs.push(Vec::new()),
                    _ => {}
                }
            }
            runs.retain(|r| !r.is_empty());
            Series {
                label: p.header[c].clone(),
                runs,
                closed: false,
                dashed: false,
            }
        })
        .collect()
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let m = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.runs.iter().flatten());
    let xmin = pts().map(|p| p.0).fold(0.0f64, f64::min);
    let ymin = pts().map(|p| p.1).fold(0.0f64, f64::min);
    let mut xmax = pts().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut ymax = pts().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if xmax.partial_cmp(&xmin) != Some(std::cmp::Ordering::Greater) {
        xmax = xmin + 1.0;
    }
    if ymax.partial_cmp(&ymin) != Some(std::cmp::Ordering::Greater) {
        ymax = ymin + 1.0;
    }
    let (xstep, ystep) = (nice_step(xmax - xmin), nice_step(ymax - ymin));
    xmax = (xmax / xstep).ceil() * xstep;
    ymax = (ymax / ystep).ceil() * ystep;

    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - xmin) / (xmax - xmin) * pw;
    let sy = |y: f64| TOP + ph - (y - ymin) / (ymax - ymin) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        esc(title)
    );

    let mut tick = xmin;
    while tick <= xmax + xstep * 1e-9 {
        let x = sx(tick);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP,
            TOP + ph,
            TOP + ph + 16.0,
            fmt_num((tick / xstep).round() * xstep)
        );
        tick += xstep;
    }
    let mut tick = ymin;
    while tick <= ymax + ystep * 1e-9 {
        let y = sy(tick);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0,
            fmt_num((tick / ystep).round() * ystep)
        );
        tick += ystep;
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 18.0,
        esc(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        TOP + ph / 2.0,
        esc(ylabel)
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let tag = if ser.closed { "polygon" } else { "polyline" };
        for run in &ser.runs {
            let coords: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                coords.join(" ")
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            esc(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}
