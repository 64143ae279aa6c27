use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Unexpected character in a configuration string.
    Parse { index: usize, found: char },
    /// The window does not end at a record (the carrier still holds balls).
    Unclosed { load: usize },
    /// The requested anchor is not a record of the configuration.
    NotRecord { site: i64 },
    /// A soliton tail of the earlier configuration has no matching head.
    Pairing { size: usize, tail: Vec<usize> },
    /// Two configurations have different soliton counts.
    Conservation { before: usize, after: usize },
    /// A soliton straddles a slot of its own size.
    SlotStraddle { size: usize, site: usize },
    /// A label outside the enumerated slot range.
    LabelOutOfRange { size: usize, label: i64 },
    /// Density parameter outside its admissible range.
    InvalidDensity(f64),
    /// Negative or non-finite entry in a speed-system input.
    InvalidInput { index: usize, value: f64 },
    /// The interaction system could not be solved.
    Singular { column: usize, pivot: f64 },
    /// A tagged item sits too close to the window edge.
    Margin {
        site: usize,
        margin: usize,
        len: usize,
    },
    /// Nothing to sample from or average over.
    Empty,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { index, found } => {
                write!(f, "invalid character {found:?} at index {index}")
            }
            Error::Unclosed { load } => write!(
                f,
                "window does not end at a record ({load} balls still carried)"
            ),
            Error::NotRecord { site } => write!(f, "site {site} is not a record"),
            Error::Pairing { size, tail } => {
                write!(f, "{size}-soliton with tail {tail:?} has no image")
            }
            Error::Conservation { before, after } => {
                write!(f, "soliton count changed from {before} to {after}")
            }
            Error::SlotStraddle { size, site } => {
                write!(f, "{size}-soliton straddles a {size}-slot at site {site}")
            }
            Error::LabelOutOfRange { size, label } => {
                write!(f, "{size}-slot label {label} is out of range")
            }
            Error::InvalidDensity(d) => write!(f, "density {d} outside (0, 1/2)"),
            Error::InvalidInput { index, value } => {
                write!(f, "invalid entry {value} at position {index}")
            }
            Error::Singular { column, pivot } => {
                write!(f, "singular system at column {column} (pivot {pivot:e})")
            }
            Error::Margin { site, margin, len } => write!(
                f,
                "tagged site {site} is within {margin} sites of the window edge (length {len})"
            ),
            Error::Empty => f.write_str("nothing to sample or average"),
        }
    }
}
