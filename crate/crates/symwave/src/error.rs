//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // lattice
    #[error("matrix is singular (det = 0)")]
    SingularMatrix,
    #[error("matrix is not expanding: eigenvalue of modulus {0} <= 1")]
    NotExpanding(f64),
    #[error("bad digit override: {0}")]
    BadOverride(String),

    // symmetry
    #[error("matrix set is not closed under multiplication (product of elements {0} and {1} missing)")]
    NotClosed(usize, usize),
    #[error("group element {0} is not unimodular")]
    NotUnimodular(usize),
    #[error("dilation matrix is not appropriate for the group: M^-1*E*M not in H for element {0}")]
    NotAppropriate(usize),
    #[error("center is not appropriate: c - E*c is not integral for element {0}")]
    BadCenter(usize),
    #[error("group closure exceeded the {0}-element cap; input does not generate a finite group")]
    ClosureCapExceeded(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("matrix is not in the stabilizer of orbit {0}")]
    NotInStabilizer(usize),
    #[error("digit set is incompatible with the orbit convention: {0}")]
    DigitIncompatible(String),

    // trigpoly
    #[error("polynomial backend mismatch")]
    BackendMismatch,
    #[error("exact sum-rule path unavailable: {0}")]
    ExactPathUnavailable(String),

    // solvers & constructions
    #[error("linear system unsolvable within support budget (final rank deficit {rank_deficit})")]
    Unsolvable { rank_deficit: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("mask has no constant polyphase component 1/sqrt(m) at any digit")]
    NotInterpolatoryAtDigit,
    #[error("lifting symmetrization unattainable: {0}")]
    SymmetryUnattainable(String),
    #[error("user lifting polynomial invalid: {0}")]
    UserPolyInvalid(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("sigma jet condition failed: {0}")]
    JetConditionFailed(String),
    #[error("algorithm step precondition failed ({step}): {detail}")]
    StepPreconditionFailed { step: String, detail: String },
    #[error("vanishing-moment deficit: mask {mask} has order {got}, expected at least {want}")]
    VmDeficit { mask: String, got: usize, want: usize },
    #[error("symmetry group is not abelian")]
    NotAbelian,

    // io
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate exponent {0:?} in mask file")]
    DuplicateExponent(Vec<i64>),
    #[error("grid block without an axes declaration")]
    GridAmbiguous,
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
