use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {0}: every cyclic factor must have order at least 2")]
    InvalidModulus(u64),

    #[error("a group presentation needs at least one cyclic factor")]
    EmptyGroup,

    #[error("could not parse group `{0}`: expected comma-separated moduli such as `5,3`")]
    GroupSyntax(String),

    #[error("group order {order} exceeds the configured cap of {cap}")]
    OrderCapExceeded { order: u64, cap: u64 },

    #[error("elements live in different groups: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("coordinates {coords:?} do not describe an element of {group}")]
    InvalidElement { coords: Vec<u64>, group: String },

    #[error("{divisor} does not divide the group order {order}")]
    NotADivisor { divisor: u64, order: u64 },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("the graph has {edges} edges but the group has order {order}")]
    OrderMismatch { edges: u64, order: u64 },

    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameter { family: String, reason: String },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
