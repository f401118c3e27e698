use thiserror::Error;

/// Errors reported by the library.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not reach tolerance: partial value {value:e}, error estimate {abs_error:e} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },
    #[error("{value} lies outside the closed range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("not a valid distribution function: {0}")]
    NotInF(String),
    #[error("left end point of the support is {0} > 0, so no Stieltjes measure exists")]
    NotInFhat(f64),
    #[error("admissibility could not be decided: {0}")]
    Inconclusive(String),
    #[error("the pair is not admissible: {0}")]
    NotAdmissible(String),
    #[error("operation requires a distribution with bounded support")]
    UnboundedSupport,
    #[error("operation requires a compound Poisson (bounded) Levy measure")]
    NotCompoundPoisson,
    #[error("no sampler available for the tilted jump law: {0}")]
    ZSamplerUnavailable(String),
    #[error("no sampler available for the size-biased law: {0}")]
    MSamplerUnavailable(String),
    #[error("no generalized inverse available: {0}")]
    InverseUnavailable(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("every sample is infinite at x = {0}, the estimate is infinite")]
    AllInfinite(f64),
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
