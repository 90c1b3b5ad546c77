use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operand violated a structural invariant (Hermiticity, unitarity,
    /// trace, positivity).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The dipole matrix element of transition |j⟩ ↔ |e⟩ is zero.
    #[error("transition |{0}> <-> |e> is unreachable (zero dipole coupling)")]
    UnreachableTransition(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
