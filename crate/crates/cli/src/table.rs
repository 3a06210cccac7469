//! Minimal CSV writing and reading for the report files.

use std::fmt::Write;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    // Rust's `Display` for floats is already shortest round-trip.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

pub fn cell(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub struct Csv {
    text: String,
    width: usize,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut text = String::new();
        let cols: Vec<&str> = header.iter().map(AsRef::as_ref).collect();
        writeln!(text, "{}", cols.join(",")).expect("writing to a String");
        Self {
            text,
            width: cols.len(),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        assert_eq!(cells.len(), self.width, "row width must match header");
        let cols: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        writeln!(self.text, "{}", cols.join(",")).expect("writing to a String");
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// A parsed CSV: header plus rows of optional numbers. Non-numeric cells
/// (labels) are kept as text.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Parsed {
    pub fn parse(text: &str) -> Self {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header = lines
            .next()
            .map(|l| l.split(',').map(str::to_owned).collect())
            .unwrap_or_default();
        let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
        Self { header, rows }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn number(&self, row: usize, col: usize) -> Option<f64> {
        self.rows.get(row)?.get(col)?.parse().ok()
    }
}
