use thiserror::Error;

use crate::lp::LpError;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("Hermitian eigensolver did not converge within {0} sweeps")]
    EigenNonConvergence(usize),

    #[error("imaginary residue {0:e} in a quantity that must be real")]
    ComplexResidue(f64),

    #[error("state is not normalized: unit effect gives {0}")]
    NotNormalized(f64),

    #[error("point is not a member of the state space")]
    NotMember,

    #[error("unsupported operation for this model: {0}")]
    Unsupported(String),

    #[error("outcome index {index} out of range for {count} outcomes")]
    OutcomeOutOfRange { index: usize, count: usize },

    #[error("kernel is not column-stochastic: {0}")]
    NonStochastic(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("no measurement distinguishes the given states")]
    NotDistinguishable,

    #[error("output cannot be decomposed into pure states: {0}")]
    NotDecomposable(String),

    #[error("cycle does not close: decompositions differ by {0:e}")]
    CycleNotClosed(f64),

    #[error("spectral entropy undefined: {0}")]
    EntropyUndefined(String),

    #[error("spectral entropy is not unique: {0:?}")]
    EntropyNotUnique(Vec<f64>),

    #[error("fixture invariant violated: {0}")]
    FixtureInvariant(String),

    #[error("swap requires equal local dimensions ({0} vs {1})")]
    SwapDimension(usize, usize),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Lp(#[from] LpError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
