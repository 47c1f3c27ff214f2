use thiserror::Error;

/// Errors produced by the volume, sampling and coding routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("distance variant `{0}` is undefined when a subspace fills the ambient space")]
    UndefinedConstant(&'static str),

    #[error("a {0}-dimensional subspace of C^{0} has no orthogonal complement")]
    EmptyComplement(usize),

    #[error("p = {p} exceeds the supported size {cap} for exact evaluation")]
    UnsupportedSize { p: usize, cap: usize },

    #[error("no tabulated closed form for (n, p, q) = ({n}, {p}, {q})")]
    NotTabulated { n: usize, p: usize, q: usize },

    #[error("radius out of range: r^2 = {r_sq} is outside [0, {max}]")]
    RadiusOutOfRange { r_sq: f64, max: f64 },

    #[error("tolerance not reached: best estimate {estimate}, achieved {achieved:e}")]
    Accuracy { estimate: f64, achieved: f64 },

    #[error("Grassmannian volume overflows f64 (log-volume {0})")]
    Overflow(f64),

    #[error("codebook is empty")]
    EmptyCodebook,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
