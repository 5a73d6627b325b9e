use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed constraint #{index}: {reason}")]
    MalformedConstraint { index: usize, reason: String },

    #[error("variable {var} has domain size {size}; at least 2 values are required")]
    DomainTooSmall { var: usize, size: u64 },

    #[error("violating tuple {0:?} listed more than once")]
    DuplicateViolatingTuple(Vec<u64>),

    #[error("assignment has {got} values, formula has {expected} variables")]
    IncompleteAssignment { expected: usize, got: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },

    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },

    #[error("value {value} out of domain 0..{size} of variable {var}")]
    ValueOutOfDomain { var: usize, value: u64, size: u64 },

    #[error("symbol {symbol} out of alphabet 0..{size} of variable {var}")]
    SymbolOutOfAlphabet { var: usize, symbol: u64, size: u64 },

    #[error("invalid projection scheme: {0}")]
    InvalidScheme(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("projection construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invalid (alpha, beta) = ({alpha}, {beta}); need 0 < beta < alpha < 1")]
    InvalidAlphaBeta { alpha: f64, beta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("regime violated: {0}")]
    RegimeViolated(String),

    #[error("enumeration needs {needed} states, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("round-down enumeration needs {needed} preimage states, budget is {budget}")]
    TooLargeToEnumerate { needed: String, budget: u64 },

    #[error("formula has no solutions")]
    NoSolutions,

    #[error("conditioning event has probability zero under the solution distribution")]
    EmptySupport,

    #[error("sample size is zero")]
    SampleSizeZero,
}
