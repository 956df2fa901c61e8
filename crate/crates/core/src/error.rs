use thiserror::Error;

/// Broad classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input data or parameters.
    Data,
    /// A numerical routine failed (factorization, convergence, rank).
    Numerical,
    /// Filesystem or stream failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge list is empty")]
    EmptyEdgeList,

    #[error("invalid weight {weight} on edge ({u}, {v})")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("vertex {0} is isolated (zero degree)")]
    IsolatedVertex(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("teleportation vector is not stochastic: {0}")]
    NotStochastic(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("column {0} of the sample matrix is entirely zero")]
    AllZeroColumn(usize),

    #[error("numerical rank {rank} is below the required {needed}")]
    RankDeficient { rank: usize, needed: usize },

    #[error("vector has zero variance")]
    ZeroVariance,

    #[error("baseline Rayleigh quotient is zero")]
    ZeroBaseline,

    #[error("graph is not regular")]
    NotRegular,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Factorization(_)
            | Error::NonConvergence { .. }
            | Error::AllZeroColumn(_)
            | Error::RankDeficient { .. }
            | Error::ZeroBaseline => ErrorClass::Numerical,
            Error::Io(_) => ErrorClass::Io,
            _ => ErrorClass::Data,
        }
    }

    /// Stable variant name for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::EmptyEdgeList => "empty_edge_list",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::IsolatedVertex(_) => "isolated_vertex",
            Error::Disconnected => "disconnected",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotStochastic(_) => "not_stochastic",
            Error::Parse { .. } => "parse",
            Error::Factorization(_) => "factorization",
            Error::NonConvergence { .. } => "non_convergence",
            Error::AllZeroColumn(_) => "all_zero_column",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::ZeroVariance => "zero_variance",
            Error::ZeroBaseline => "zero_baseline",
            Error::NotRegular => "not_regular",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
