use std::fmt;

use thiserror::Error;

/// A single broken instance invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub location: Location,
    pub reason: String,
}

/// Where in an instance a [`Violation`] was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Instance,
    Vehicle(usize),
    Station(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Location::Instance => write!(f, "instance: {}", self.reason),
            Location::Vehicle(i) => write!(f, "vehicle {i}: {}", self.reason),
            Location::Station(j) => write!(f, "station {j}: {}", self.reason),
        }
    }
}

/// All violations found while validating an instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("refused: {what} is {actual}, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("LP solver failed: {0}")]
    Solver(String),

    #[error("fractional solution is not integral: x{triple:?} = {value}")]
    NonIntegral {
        triple: (usize, usize, usize),
        value: f64,
    },

    #[error("packing overflow on x-span [{start}, {end}): need {needed}, free {free}")]
    Packing {
        start: usize,
        end: usize,
        needed: f64,
        free: f64,
    },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
