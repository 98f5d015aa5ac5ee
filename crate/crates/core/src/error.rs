use thiserror::Error;

use crate::holonomy::GrowthTable;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("linear part is not unipotent")]
    NotUnipotent,

    #[error("form is not antisymmetric")]
    NotAntisymmetric,

    #[error("form is degenerate or lives in odd dimension")]
    NotSymplectic,

    #[error("span has rank {rank}, a lagrangian subspace needs rank {expected}")]
    WrongRank { rank: usize, expected: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),

    #[error("malformed word `{0}`")]
    MalformedWord(String),

    #[error("element cap of {cap} exceeded")]
    CapExceeded { cap: usize, partial: GrowthTable },

    #[error("relator {index} (`{relator}`) does not evaluate to the identity")]
    RelatorViolation { index: usize, relator: String },

    #[error("rational span is not closed under the product")]
    NotClosed,

    #[error("no square-zero element at stage {stage} (dimension {dimension})")]
    NoSquareZero { stage: usize, dimension: usize },

    #[error("element does not lie in the span")]
    NotInSpan,

    #[error("element does not square to zero")]
    NotSquareZero,

    #[error("line spanned by the element is not an ideal")]
    NotIdeal,

    #[error("values do not define a cocycle")]
    InvalidCocycle,

    #[error("transverse representation has nonzero translation on generator {0}")]
    NonlinearTransverse(usize),

    #[error("duality law fails on generator {0}")]
    InconsistentDuality(usize),

    #[error("field discriminant {0} is not a square-free positive integer")]
    BadDiscriminant(u64),

    #[error("mixed quadratic fields Q(sqrt {0}) and Q(sqrt {1})")]
    MixedFields(u64, u64),

    #[error("malformed scalar `{0}`")]
    MalformedScalar(String),

    #[error("invalid manifest: {0}")]
    Manifest(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("unknown catalog example `{0}`")]
    UnknownExample(String),

    #[error("option out of range: {0}")]
    OptionRange(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
