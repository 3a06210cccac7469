//! Report generation behind the `zic` binary.
//!
//! Commands build their artifacts in memory; the binary only writes them
//! out. That keeps every command testable and byte-for-byte reproducible.

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;

use std::path::Path;

use thiserror::Error;

pub use commands::{cmd_gdof, cmd_region, cmd_sumrate, cmd_verify, GdofSpec, SumrateSpec};
pub use config::{Scenario, ScenarioFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parameter out of range: {0}")]
    Domain(zic_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<zic_core::Error> for CliError {
    fn from(e: zic_core::Error) -> Self {
        match e {
            zic_core::Error::GridTooCoarse { .. } => CliError::Config(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

/// A named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub artifacts: Vec<Artifact>,
    pub warnings: Vec<String>,
}

impl Output {
    pub fn push(&mut self, name: impl Into<String>, contents: String) {
        self.artifacts.push(Artifact {
            name: name.into(),
            contents,
        });
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.artifacts
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.contents.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            std::fs::write(dir.join(&a.name), &a.contents)?;
        }
        Ok(())
    }
}
