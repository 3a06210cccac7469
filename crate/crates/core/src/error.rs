use thiserror::Error;

/// Errors raised by the core computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("hull of an empty point set")]
    EmptyInput,
    #[error("half-plane intersection is unbounded along {0}")]
    Unbounded(&'static str),
    #[error("half-plane intersection does not contain the origin")]
    Infeasible,
    #[error("grid axis {axis} has {points} point(s); at least 2 are required")]
    GridTooCoarse { axis: &'static str, points: usize },
    #[error("SNR ladder has {0} rung(s); at least 4 are required")]
    LadderTooShort(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, inf)",
        })
    }
}
