use core::fmt;

/// Errors raised by the numerical core.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    Domain(&'static str),
    /// Normalization was requested for a state with zero norm.
    NullState,
    /// Two grids or fields that must match do not.
    GridMismatch(&'static str),
    /// A mode-space boost was requested for a non-vacuum dispersion.
    BoostRequiresVacuum,
    /// Helicity density was requested for a snapshot carrying several helicities.
    MixedHelicity,
    /// A Fock-space index at or beyond the truncation edge.
    TruncationEdge { n: usize, dim: usize },
    /// Emitters in one scenario inject more than a single photon.
    TooManyPhotons(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NullState => f.write_str("cannot normalize null state"),
            Error::GridMismatch(what) => write!(f, "grid mismatch: {what}"),
            Error::BoostRequiresVacuum => f.write_str("boost defined only in vacuum"),
            Error::MixedHelicity => f.write_str("helicity density defined per λ"),
            Error::TruncationEdge { n, dim } => {
                write!(f, "truncation edge: n = {n} with dimension {dim}")
            }
            Error::TooManyPhotons(total) => {
                write!(f, "emitter strengths sum to {total}, exceeding the single-photon limit")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
