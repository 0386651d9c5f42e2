use core::fmt;

/// Failure modes of the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    Domain(&'static str),
    /// A denominator vanished (pole of a theta quotient).
    Singular(&'static str),
    /// Heights or spins violate the admissibility rule.
    Inadmissible,
    /// A linear solve left a residual above tolerance.
    NoSolution { residual: f64 },
    /// A quantity expected to be independent of its labels was not.
    ConventionMismatch { spread: f64 },
    /// Requested size exceeds what the exact arithmetic can hold.
    Capacity,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Singular(what) => write!(f, "singular input: {what}"),
            Error::Inadmissible => write!(f, "inadmissible heights or spins"),
            Error::NoSolution { residual } => {
                write!(f, "no solution (residual {residual:e})")
            }
            Error::ConventionMismatch { spread } => {
                write!(f, "convention mismatch (spread {spread:e})")
            }
            Error::Capacity => write!(f, "capacity exceeded"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
