use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid machine dimensions n={n} k={k} (need n >= 1, 2 <= k <= 10)")]
    InvalidDimensions { n: u32, k: u32 },

    #[error("rule space ({n},{k}) does not fit in 128 bits")]
    Overflow { n: u32, k: u32 },

    #[error("rule number {rule} out of range for ({n},{k}) (space size {size})")]
    RuleOutOfRange { n: u32, k: u32, rule: u128, size: u128 },

    #[error("invalid instruction: {0}")]
    InvalidInstruction(String),

    #[error("invalid transition table: {0}")]
    InvalidTable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("machine is already in the halting state")]
    AlreadyHalted,

    #[error("invalid tape: {0}")]
    InvalidTape(String),

    #[error("diagram has not halted")]
    NotHalted,

    #[error("search space of {size} machines exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("no registry entry for ({n},{k})")]
    UnknownRegistryEntry { n: u32, k: u32 },

    #[error("registry data is inconsistent: {0}")]
    Registry(String),

    #[error("transform enumeration for k={k} b={b} has too many members")]
    TooManyTransforms { k: u32, b: u32 },

    #[error("invalid block transform: {0}")]
    InvalidTransform(String),

    #[error("belief parameter {0} outside (0, 1]")]
    InvalidBelief(f64),

    #[error("comparison group `{0}` is empty")]
    EmptyGroup(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
