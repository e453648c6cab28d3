//! Front end for `bec-impurity`: JSON run configuration, parameter sweeps
//! written as CSV or JSON, and the oracle suite.

pub mod checks;
pub mod commands;
pub mod config;
pub mod table;

use std::fmt;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

/// An error sorted by who has to fix it: the user (bad input) or the
/// numerics.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Numerical(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => exit::CONFIG,
            Failure::Numerical(_) => exit::NUMERICAL,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "configuration error: {e:#}"),
            Failure::Numerical(e) => write!(f, "numerical failure: {e:#}"),
        }
    }
}

impl From<bec_impurity::Error> for Failure {
    fn from(e: bec_impurity::Error) -> Self {
        use bec_impurity::Error as E;
        match e {
            E::NoConvergence { .. } | E::PerturbativeBreakdown { .. } | E::SingularCoefficients => {
                Failure::Numerical(e.into())
            }
            _ => Failure::Config(e.into()),
        }
    }
}
