//! Scenario files and command-line overrides.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! schemes = ["key-splitting-an", "otp"]
//!
//! [channel]
//! h21 = 0.6
//! p_db = 20      # or p = 100, or p1/p2, p1_db/p2_db
//! rk = 0.2
//!
//! [grid]
//! n = 17         # shorthand for every axis
//! n_eta = 11
//! full_power = false
//!
//! [bounds]
//! nonsecrecy = true
//!
//! [outputs]
//! svg = true
//! ```
//!
//! Every key is optional. Flags given on the command line win over the file.

use std::path::Path;

use serde::Deserialize;
use zic_core::{ChannelParams, GridSpec, Scheme};

use crate::CliError;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub h11: Option<f64>,
    pub h22: Option<f64>,
    pub h21: Option<f64>,
    /// Common value of `p1` and `p2`.
    pub p: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p_db: Option<f64>,
    pub p1_db: Option<f64>,
    pub p2_db: Option<f64>,
    pub rk: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Option<usize>,
    pub n_lambda1: Option<usize>,
    pub n_lambda2: Option<usize>,
    pub n_beta1: Option<usize>,
    pub n_beta2: Option<usize>,
    pub n_eta: Option<usize>,
    pub include_gdof_split: Option<bool>,
    pub full_power: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default = "yes")]
    pub thm3: bool,
    #[serde(default = "yes")]
    pub thm4: bool,
    #[serde(default = "yes")]
    pub p2p: bool,
    #[serde(default)]
    pub nonsecrecy: bool,
}

fn yes() -> bool {
    true
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            thm3: true,
            thm4: true,
            p2p: true,
            nonsecrecy: false,
        }
    }
}

impl Bounds {
    pub fn any(&self) -> bool {
        self.thm3 || self.thm4 || self.p2p || self.nonsecrecy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default)]
    pub svg: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { csv: true, svg: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Alpha,
    Rk,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumrateSection {
    pub axis: Option<SweepAxis>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: Option<usize>,
    /// Interference exponent held fixed on the `rk` axis.
    pub alpha: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GdofSection {
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub schemes: Option<Vec<String>>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schemes: Option<Vec<String>>,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub grid: GridSection,
    pub bounds: Option<Bounds>,
    pub outputs: Option<Outputs>,
    #[serde(default)]
    pub sumrate: SumrateSection,
    #[serde(default)]
    pub gdof: GdofSection,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Layers `over` on top of `self`; fields set in `over` win.
    pub fn merge(mut self, over: ScenarioFile) -> Self {
        macro_rules! take {
            ($($dst:expr => $src:expr),* $(,)?) => { $( if $src.is_some() { $dst = $src; } )* };
        }
        let (c, g, s, d) = (over.channel, over.grid, over.sumrate, over.gdof);
        take!(
            self.schemes => over.schemes,
            self.bounds => over.bounds,
            self.outputs => over.outputs,
            self.channel.h11 => c.h11, self.channel.h22 => c.h22, self.channel.h21 => c.h21,
            self.channel.rk => c.rk,
            self.grid.n => g.n, self.grid.n_lambda1 => g.n_lambda1, self.grid.n_lambda2 => g.n_lambda2,
            self.grid.n_beta1 => g.n_beta1, self.grid.n_beta2 => g.n_beta2, self.grid.n_eta => g.n_eta,
            self.grid.include_gdof_split => g.include_gdof_split, self.grid.full_power => g.full_power,
            self.sumrate.axis => s.axis, self.sumrate.from => s.from, self.sumrate.to => s.to,
            self.sumrate.steps => s.steps, self.sumrate.alpha => s.alpha,
            self.gdof.alpha => d.alpha, self.gdof.gamma => d.gamma, self.gdof.eta => d.eta,
            self.gdof.schemes => d.schemes,
        );
        // Any power given on the command line replaces every power in the file.
        let powers = [c.p, c.p1, c.p2, c.p_db, c.p1_db, c.p2_db];
        if powers.iter().any(Option::is_some) {
            self.channel.p = c.p;
            self.channel.p1 = c.p1;
            self.channel.p2 = c.p2;
            self.channel.p_db = c.p_db;
            self.channel.p1_db = c.p1_db;
            self.channel.p2_db = c.p2_db;
        }
        self
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub channel: ChannelParams,
    pub grid: GridSpec,
    pub schemes: Vec<Scheme>,
    pub bounds: Bounds,
    pub outputs: Outputs,
}

fn pick_power(
    which: &str,
    own: Option<f64>,
    own_db: Option<f64>,
    common: Option<f64>,
    common_db: Option<f64>,
) -> Result<f64, CliError> {
    let given = [own, own_db.map(db_to_linear), common, common_db.map(db_to_linear)];
    if own.is_some() && own_db.is_some() {
        return Err(CliError::Config(format!("{which} given both in linear units and in dB")));
    }
    if common.is_some() && common_db.is_some() {
        return Err(CliError::Config("p given both in linear units and in dB".into()));
    }
    Ok(given.into_iter().flatten().next().unwrap_or(100.0))
}

pub fn parse_schemes(names: &[String]) -> Result<Vec<Scheme>, CliError> {
    let mut out = Vec::new();
    for name in names {
        let s = Scheme::from_slug(name.trim())
            .ok_or_else(|| CliError::Config(format!("unknown scheme '{name}'")))?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

impl ChannelSection {
    pub fn resolve(&self) -> Result<ChannelParams, CliError> {
        let p1 = pick_power("p1", self.p1, self.p1_db, self.p, self.p_db)?;
        let p2 = pick_power("p2", self.p2, self.p2_db, self.p, self.p_db)?;
        Ok(ChannelParams::new(
            self.h11.unwrap_or(1.0),
            self.h22.unwrap_or(1.0),
            self.h21.unwrap_or(0.6),
            p1,
            p2,
            self.rk.unwrap_or(0.2),
        )?)
    }
}

impl GridSection {
    pub fn resolve(&self) -> GridSpec {
        let base = self.n.map_or_else(GridSpec::default, |n| GridSpec {
            n_eta: n,
            ..GridSpec::uniform(n)
        });
        GridSpec {
            n_lambda1: self.n_lambda1.unwrap_or(base.n_lambda1),
            n_lambda2: self.n_lambda2.unwrap_or(base.n_lambda2),
            n_beta1: self.n_beta1.unwrap_or(base.n_beta1),
            n_beta2: self.n_beta2.unwrap_or(base.n_beta2),
            n_eta: self.n_eta.unwrap_or(base.n_eta),
            include_gdof_split: self.include_gdof_split.unwrap_or(base.include_gdof_split),
            full_power: self.full_power.unwrap_or(base.full_power),
        }
    }

    /// Parses `17` or `lambda1=9,lambda2=9,beta1=5,beta2=5,eta=3`.
    pub fn from_spec(spec: &str) -> Result<Self, CliError> {
        let bad = |what: &str| CliError::Config(format!("bad --grid '{spec}': {what}"));
        let count = |v: &str| v.trim().parse::<usize>().map_err(|_| bad("counts are integers"));
        if !spec.contains('=') {
            return Ok(Self {
                n: Some(count(spec)?),
                ..Self::default()
            });
        }
        let mut g = Self::default();
        for part in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v = Some(count(v)?);
            match k.trim() {
                "n" => g.n = v,
                "lambda1" => g.n_lambda1 = v,
                "lambda2" => g.n_lambda2 = v,
                "beta1" => g.n_beta1 = v,
                "beta2" => g.n_beta2 = v,
                "eta" => g.n_eta = v,
                other => return Err(bad(&format!("unknown axis '{other}'"))),
            }
        }
        Ok(g)
    }
}

impl ScenarioFile {
    pub fn resolve(&self, default_schemes: &[Scheme]) -> Result<Scenario, CliError> {
        let schemes = match &self.schemes {
            Some(names) => parse_schemes(names)?,
            None => default_schemes.to_vec(),
        };
        let bounds = self.bounds.unwrap_or_default();
        if schemes.is_empty() && !bounds.any() {
            return Err(CliError::Config("select at least one scheme or bound".into()));
        }
        Ok(Scenario {
            channel: self.channel.resolve()?,
            grid: self.grid.resolve(),
            schemes,
            bounds,
            outputs: self.outputs.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let sc = ScenarioFile::parse("").unwrap().resolve(&Scheme::ALL).unwrap();
        assert_eq!(sc.channel, ChannelParams::new(1.0, 1.0, 0.6, 100.0, 100.0, 0.2).unwrap());
        assert_eq!(sc.grid, GridSpec::default());
        assert_eq!(sc.schemes.len(), 5);
        assert!(!sc.bounds.nonsecrecy);
    }

    #[test]
    fn db_powers() {
        let f = ScenarioFile::parse("[channel]\np_db = 20\np2_db = 10\n").unwrap();
        let ch = f.resolve(&Scheme::ALL).unwrap().channel;
        assert!((ch.p1 - 100.0).abs() < 1e-9);
        assert!((ch.p2 - 10.0).abs() < 1e-12);
        assert!(ScenarioFile::parse("[channel]\np1 = 3\np1_db = 3\n")
            .unwrap()
            .resolve(&Scheme::ALL)
            .is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ScenarioFile::parse("schemes = [\"otp\"]\n[channel]\nh21 = 0.8\np = 10\n").unwrap();
        let flags = ScenarioFile {
            channel: ChannelSection {
                h21: Some(1.2),
                p1_db: Some(20.0),
                ..Default::default()
            },
            ..Default::default()
        };
        let sc = file.merge(flags).resolve(&Scheme::ALL).unwrap();
        assert_eq!(sc.channel.h21, 1.2);
        assert!((sc.channel.p1 - 100.0).abs() < 1e-9);
        assert_eq!(sc.channel.p2, 100.0);
        assert_eq!(sc.schemes, vec![Scheme::OneTimePad]);
    }

    #[test]
    fn unknown_keys_and_schemes_are_config_errors() {
        assert!(matches!(ScenarioFile::parse("[channel]\nh12 = 1\n"), Err(CliError::Config(_))));
        let f = ScenarioFile::parse("schemes = [\"nope\"]").unwrap();
        assert!(matches!(f.resolve(&Scheme::ALL), Err(CliError::Config(_))));
    }

    #[test]
    fn negative_power_is_a_domain_error() {
        let f = ScenarioFile::parse("[channel]\np = -1").unwrap();
        assert!(matches!(f.resolve(&Scheme::ALL), Err(CliError::Domain(_))));
    }

    #[test]
    fn grid_specs() {
        let g = GridSection::from_spec("9").unwrap().resolve();
        assert_eq!(g, GridSpec { n_eta: 9, ..GridSpec::uniform(9) });
        let g = GridSection::from_spec("lambda1=5, eta=3").unwrap().resolve();
        assert_eq!((g.n_lambda1, g.n_lambda2, g.n_eta), (5, 33, 3));
        assert!(GridSection::from_spec("mu=3").is_err());
        assert!(GridSection::from_spec("x").is_err());
    }

    #[test]
    fn nothing_selected_is_rejected() {
        let f = ScenarioFile::parse(
            "schemes = []\n[bounds]\nthm3 = false\nthm4 = false\np2p = false\n",
        )
        .unwrap();
        assert!(f.resolve(&Scheme::ALL).is_err());
    }
}
