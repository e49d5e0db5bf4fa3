use thiserror::Error;

/// Which operand of a QAP instance an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The flow / similarity matrix `A`.
    Flow,
    /// The distance / dissimilarity matrix `B`.
    Distance,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Flow => f.write_str("A"),
            Side::Distance => f.write_str("B"),
        }
    }
}

/// Errors raised by the library. Indices carried by variants are zero-based;
/// their `Display` output is one-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{0}")]
    Range(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("non-finite entry at ({}, {})", .i + 1, .j + 1)]
    NonFinite { i: usize, j: usize },

    #[error("asymmetric input at ({},{})/({},{}): difference {diff}", .i + 1, .j + 1, .j + 1, .i + 1)]
    AsymmetricInput { i: usize, j: usize, diff: f64 },

    #[error("nonzero diagonal entry at ({0},{0})", .index + 1)]
    NonzeroDiagonal { index: usize },

    #[error("matrix is reducible: support graph has {} connected components", .components.len())]
    ReducibleMatrix { components: Vec<Vec<usize>> },

    #[error("degenerate spectrum: second and third Laplacian eigenvalues {lambda2} and {lambda3} coincide")]
    DegenerateSpectrum { lambda2: f64, lambda3: f64 },

    #[error("repeated Fiedler entries at positions {} and {}", .i + 1, .j + 1)]
    RepeatedFiedlerEntries { i: usize, j: usize },

    #[error("spectral ordering needs n >= 2")]
    TrivialDimension,

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("no Robinson ordering detected for {side}: {cause}")]
    NotRobinsonianDetected { side: Side, cause: String },

    #[error("neither reordered matrix is Toeplitz")]
    NotToeplitzAfterReordering,

    #[error("instance too large for exhaustive search: n = {n} exceeds cap {cap}")]
    InstanceTooLarge { n: usize, cap: usize },

    #[error("precondition failed: {0}")]
    PredicateFailed(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
