use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument of Γ lies on (or within tolerance of) a pole.
    Pole { re: f64, im: f64 },
    /// Lower hypergeometric parameter is a non-positive integer.
    ParameterPole { c: f64 },
    /// An iterative scheme did not reach its tolerance.
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },
    /// Argument outside the domain of the routine.
    Domain { what: &'static str, value: f64 },
    /// Bessel order outside the half-integer lattice.
    UnsupportedOrder(f64),
    /// Invalid (n, s) pair or other structural parameter.
    InvalidParameter { what: &'static str, value: f64 },
    /// Radial profile reaches the boundary of the ball or is not compactly supported.
    Support { radius: f64 },
    /// Truncated spectral tail exceeds tolerance.
    Tail { relative: f64 },
    /// Data cannot be fitted (underflow, too few points, zero differences).
    DegenerateData(&'static str),
    /// The trial function vanishes identically.
    ZeroTrial,
    /// Optimizer stopped at its evaluation cap before meeting the tolerance.
    BudgetExceeded { evaluations: usize, best: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { re, im } => write!(f, "gamma pole at {re}{im:+}i"),
            Error::ParameterPole { c } => {
                write!(
                    f,
                    "hypergeometric parameter c = {c} is a non-positive integer"
                )
            }
            Error::NonConvergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::UnsupportedOrder(nu) => write!(f, "unsupported Bessel order {nu}"),
            Error::InvalidParameter { what, value } => write!(f, "invalid {what}: {value}"),
            Error::Support { radius } => write!(f, "support radius {radius} not admissible"),
            Error::Tail { relative } => {
                write!(f, "spectral tail too large (relative mass {relative:e})")
            }
            Error::DegenerateData(what) => write!(f, "degenerate data: {what}"),
            Error::ZeroTrial => write!(f, "trial function vanishes identically"),
            Error::BudgetExceeded { evaluations, best } => {
                write!(
                    f,
                    "evaluation budget of {evaluations} exhausted (best quotient {best})"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
