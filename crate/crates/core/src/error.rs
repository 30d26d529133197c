use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `1/h` is not an integer, or `h` is too coarse, so breakpoints would
    /// not land on grid nodes.
    GridAlignment { h: f64 },
    /// A parameter is outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// Evaluation or integration beyond the last node; extend the grid.
    OutOfGrid { requested: f64, grid_end: f64 },
    /// Adaptive refinement hit its depth limit before meeting the tolerance.
    Quadrature { a: f64, b: f64, error_estimate: f64 },
    /// A probability came out beyond the clamp band around `[0, 1]`.
    ProbabilityOutOfRange { value: f64 },
    /// The closed form only exists for `1 < u <= 2`.
    UnsupportedClosedForm { u: f64 },
    /// The integral diverges at this parameter.
    Divergent { parameter: f64 },
    /// Truncated tail is not negligible at the requested cut-off.
    TailNotNegligible { cutoff: f64, bound: f64 },
    /// Integer is beyond the range covered by the sieve.
    SieveRange { n: u64, limit: u64 },
    /// Sieve request above the memory guard.
    SieveTooLarge { requested: u64, guard: u64 },
    /// A sample grid is not strictly increasing inside `[0, 1]`.
    InvalidGrid { reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GridAlignment { h } => {
                write!(
                    f,
                    "grid step {h} must satisfy h <= 1/100 with 1/h an integer"
                )
            }
            Error::Domain { what, value } => write!(f, "{what} (got {value})"),
            Error::OutOfGrid {
                requested,
                grid_end,
            } => write!(
                f,
                "argument {requested} lies beyond grid end {grid_end}; extend the grid"
            ),
            Error::Quadrature {
                a,
                b,
                error_estimate,
            } => write!(
                f,
                "quadrature did not converge on [{a}, {b}] (error estimate {error_estimate:e})"
            ),
            Error::ProbabilityOutOfRange { value } => {
                write!(f, "probability {value} outside [0, 1] beyond clamp band")
            }
            Error::UnsupportedClosedForm { u } => {
                write!(f, "closed form needs 1 < u <= 2 (got u = {u})")
            }
            Error::Divergent { parameter } => {
                write!(f, "integral diverges at parameter {parameter}")
            }
            Error::TailNotNegligible { cutoff, bound } => write!(
                f,
                "tail beyond {cutoff} bounded only by {bound:e}; extend the cut-off"
            ),
            Error::SieveRange { n, limit } => {
                write!(f, "{n} is outside the sieve range [1, {limit}]")
            }
            Error::SieveTooLarge { requested, guard } => {
                write!(f, "sieve limit {requested} exceeds memory guard {guard}")
            }
            Error::InvalidGrid { reason } => write!(f, "invalid grid: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
