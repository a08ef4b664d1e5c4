use thiserror::Error;

/// Errors surfaced by every layer of the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed straight-line program: {0}")]
    MalformedSlp(String),
    #[error("non-finite intermediate value at node {node}")]
    NonFiniteIntermediate { node: usize },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear form {0} has no nonzero coefficient")]
    ZeroRow(usize),
    #[error("polynomial degree {0} is too low (need at least 2)")]
    DegreeTooLow(u32),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("linear form {0} vanishes on the hyperbolicity direction")]
    VanishingOnDirection(usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("instance too large for enumeration: {0}")]
    TooLarge(String),
    #[error("invalid hyperbolicity direction: p(e) = {0}")]
    InvalidDirection(f64),
    #[error("univariate restriction is ill-conditioned (refit residual {0:.3e})")]
    IllConditioned(f64),
    #[error("non-real roots (imaginary residue {residue:.3e})")]
    NonRealRoots { residue: f64 },
    #[error("point outside barrier domain{}: {reason}", block.map(|b| format!(" (block {b})")).unwrap_or_default())]
    OutsideDomain { block: Option<usize>, reason: String },
    #[error("support function is unbounded")]
    UnboundedSupport,
    #[error("linear map has deficient column rank")]
    RankDeficient,
    #[error("normal matrix is singular")]
    SingularNormalMatrix,
    #[error("search direction is not finite")]
    NonFiniteDirection,
    #[error("path parameter is not positive ({0:.3e})")]
    NonPositiveMu(f64),
    #[error("step length below 1e-12")]
    StepTooSmall,
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn outside(block: Option<usize>, reason: impl Into<String>) -> Self {
        Error::OutsideDomain { block, reason: reason.into() }
    }

    /// Attach a block index to an [`Error::OutsideDomain`].
    pub(crate) fn in_block(self, index: usize) -> Self {
        match self {
            Error::OutsideDomain { reason, .. } => Error::OutsideDomain { block: Some(index), reason },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
