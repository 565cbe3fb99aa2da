use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("group axiom violated: {0}")]
    Violation(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("order cap exceeded: {what} would exceed {cap}")]
    CapExceeded { what: String, cap: u64 },

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u128,
    },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("variable index overflow: {0}")]
    VariableOverflow(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("structural assertion failed: {0}")]
    Structural(String),

    #[error("invalid moduli: {0}")]
    InvalidModuli(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("certificate mismatch: {0}")]
    Mismatch(String),

    #[error("group file: {0}")]
    GroupFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
