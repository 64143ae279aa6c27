//! Command-line front end for the box-ball system: text formats, run
//! directories, space-time rasters and statistical checks.

pub mod cli;
pub mod formats;
pub mod raster;
pub mod run;
pub mod selftest;
pub mod stats;

use std::fmt;

use bbs_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input; exit code 2.
    Usage(String),
    /// A checked invariant did not hold; exit code 1.
    Consistency(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Consistency(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Consistency(m) => write!(f, "consistency failure: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<formats::FormatError> for CliError {
    fn from(e: formats::FormatError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Pairing { .. } | Error::Conservation { .. } | Error::SlotStraddle { .. } => {
                CliError::Consistency(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}
