use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("operators live on different algebra shapes")]
    ShapeMismatch,
    #[error("operator is not positive (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("operator is not a projection")]
    NotProjection,
    #[error("numerical failure: {0}")]
    NumericFailure(String),
    #[error("infinite trace: a nonzero block carries infinite weight")]
    InfiniteTrace,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("operator is not tau-compact: level {level} has infinite width")]
    NotTauCompact { level: f64 },
    #[error("flag not constructible in atomic model: block {block} carries nonzero spectrum")]
    FlagNotConstructible { block: usize },
    #[error("singular operator")]
    Singular,
    #[error("shape too large: total dimension {dim} exceeds {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("refused: {0}")]
    Refused(String),
    #[error(
        "majorization violated in block {block}: <xx* v, v> exceeds lambda <yy* v, v> by {excess:e}"
    )]
    MajorizationViolated {
        block: usize,
        excess: f64,
        witness: Vec<num_complex::Complex64>,
    },
    #[error("{spec} is not strictly increasing: x = {}, y = {} have equal norms", x.to_json(), y.to_json())]
    NonStrictNorm {
        spec: String,
        x: Box<crate::algebra::Operator>,
        y: Box<crate::algebra::Operator>,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}
