use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance has no groups")]
    EmptyInstance,
    #[error("group {group} has no items")]
    EmptyGroup { group: usize },
    #[error("negative value {value} ({what})")]
    NegativeValue { what: String, value: f64 },
    #[error("non-finite value ({what})")]
    NonFiniteValue { what: String },
    #[error("choice has {found} picks, instance has {expected} groups")]
    ChoiceLength { expected: usize, found: usize },
    #[error("pick {pick} out of range for group {group} with {len} items")]
    IndexOutOfRange { group: usize, pick: usize, len: usize },
    #[error("objective extremes coincide; epsilon weights undefined")]
    DegenerateObjective,
    #[error("approximate outcome lies on the anchor level f2 = b1")]
    DegenerateGeometry,
    #[error("iteration limit {0} exceeded")]
    IterationLimit(usize),
    #[error("choice space of size {size} exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("no feasible choice: minimal cost exceeds budget")]
    InfeasibleInstance,
    #[error("item data is not integral")]
    NonIntegralData,
    #[error("DP table needs {needed} bytes, budget is {budget}")]
    MemoryBudgetExceeded { needed: u128, budget: u128 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported format version {found}")]
    VersionMismatch { found: String },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
