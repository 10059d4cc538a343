use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed rational literal {0:?}")]
    ParseRational(String),

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("vector does not lie in the subspace")]
    NotInSubspace,

    #[error("alphabet mismatch: {left} vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("grade mismatch: {left} vs {right}")]
    GradeMismatch { left: usize, right: usize },

    #[error("letter {letter} out of range for an alphabet of size {n}")]
    LetterOutOfRange { letter: usize, n: usize },

    #[error("classes belong to different algebras")]
    AlgebraMismatch,

    #[error("relation degree N must be at least 2, got {0}")]
    InvalidRelationDegree(usize),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("constant term is not invertible")]
    NotInvertible,

    #[error("word {0:?} contains an N-descent")]
    NotAdmissible(Vec<usize>),

    #[error("the matrix does not specialize the bialgebra of this algebra")]
    NotSpecializable,

    #[error("operation requires the polynomial algebra")]
    NotPolynomial,

    #[error("Koszul inclusion failed: J_{m} is not contained in V^{split} (x) J_{rest}")]
    InclusionFailure { m: usize, split: usize, rest: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("ambient dimension {ambient} exceeds the limit {limit}")]
    TooLarge { ambient: u128, limit: u128 },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
