//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("block {block}: expected a {expected_rows}x{expected_cols} matrix, got {rows}x{cols}")]
    DimensionMismatch {
        block: usize,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("operands live on different algebra shapes")]
    ShapeMismatch,

    #[error("algebra shape must have at least one block, all of positive dimension")]
    EmptyShape,

    #[error("element is not self-adjoint (max deviation {deviation:.3e})")]
    NotSelfAdjoint { deviation: f64 },

    #[error("element is not positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error(
        "generator {generator}, block {block}: matrix is not unitary (deviation {deviation:.3e})"
    )]
    NotUnitary {
        generator: usize,
        block: usize,
        deviation: f64,
    },

    #[error("invalid block permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group word: {0}")]
    InvalidWord(String),

    #[error("state validation failed: {0}")]
    InvalidState(String),

    #[error("empty averaging set")]
    EmptyAverageSet,

    #[error("Folner window too large: |F_k| = {size} exceeds cap {cap}")]
    FolnerCapExceeded { size: u128, cap: u128 },

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("action failed validation:\n{0}")]
    InvalidAction(String),

    #[error("hull of states must be nonempty")]
    EmptyHull,

    #[error("state {index} in the hull is not invariant (deviation {deviation:.3e})")]
    NotInvariantState { index: usize, deviation: f64 },

    #[error("fixed-point algebra is not abelian; the invariant states do not form a simplex")]
    NotAbelian,

    #[error("no minimal projection with index {index} (fixed algebra has {count})")]
    ProjectionIndex { index: usize, count: usize },

    #[error("eigensolver failed to converge")]
    NonConvergence,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("homomorphism validation failed: {0}")]
    InvalidHomomorphism(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("malformed system file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for input/contract errors, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence | Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}
