use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Adaptive quadrature exhausted its subdivision budget before meeting
    /// the requested tolerance.
    NonConvergent,
    /// The endpoints handed to the bracketed root finder do not straddle a
    /// sign change.
    NoBracket,
    /// Two poles of the combiner-output Laplace transform coincide outside
    /// the handled equal-rate case, or the relay count exceeds what the
    /// coefficient builder evaluates reliably.
    DegenerateRates,
    /// A configuration field violates its invariant (e.g. `n_c > n`).
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergent => write!(f, "quadrature did not converge"),
            Error::NoBracket => write!(f, "root bracket endpoints have the same sign"),
            Error::DegenerateRates => write!(f, "degenerate rate parameters"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
