use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation ({0}, {1}) violates the natural labeling (need i < j)")]
    LabelOrderViolation(usize, usize),
    #[error("element {element} is out of range 1..={n}")]
    OutOfRange { element: usize, n: usize },
    #[error("poset must have at least one element")]
    EmptyPoset,
    #[error("element {0} is extremal, not interior")]
    NotInterior(usize),
    #[error("size {size} exceeds the bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("poset has height {height}, only height <= {bound} is supported here")]
    HeightBound { height: usize, bound: usize },
    #[error("poset is disconnected")]
    Disconnected,
    #[error("type-A Lie poset algebras need at least two poset elements")]
    TooSmall,
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("bracket table is not antisymmetric at ({0}, {1})")]
    AntisymmetryViolation(usize, usize),
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisOutOfRange { index: usize, dim: usize },
    #[error("algebra has even dimension {0}; contact machinery needs odd dimension")]
    EvenDimension(usize),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("functional does not fit this algebra: {0}")]
    FunctionalMismatch(String),
    #[error("gluing precondition violated: {0}")]
    RulePreconditionViolated(String),
    #[error("target {element} has the wrong polarity: {detail}")]
    PolarityMismatch { element: usize, detail: String },
    #[error("rule {rule} does not apply to block {block}")]
    RuleBlockMismatch { block: String, rule: String },
    #[error("invalid contact sequence at step {step}: {reason}")]
    InvalidSequence { step: usize, reason: String },
    #[error("poset is not Frobenius: {0}")]
    NotFrobenius(String),
    #[error("poset is not contact: {0}")]
    NotContact(String),
    #[error("no regular functional found after {0} attempts")]
    RegularSearchExhausted(usize),
    #[error("discrete Morse condition violated at face {face:?}: {detail}")]
    MorseConditionViolated { face: Vec<usize>, detail: String },
    #[error("assignment is missing face {0:?}")]
    MissingFace(Vec<usize>),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
