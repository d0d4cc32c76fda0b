use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space mismatch: expected `{expected}`, found `{found}`")]
    SpaceMismatch { expected: String, found: String },

    #[error("size cap exceeded at state `{state}`: {needed} entries, cap {cap}")]
    SizeCapExceeded {
        state: String,
        needed: usize,
        cap: usize,
    },

    #[error("operation requires a homogeneous structure (source `{source_space}`, target `{target_space}`)")]
    NotHomogeneous {
        source_space: String,
        target_space: String,
    },

    #[error("relation on `{space}` is not a preorder: {reason}")]
    InvalidPreorder { space: String, reason: String },

    #[error("state `{state}` is not covered by the goal")]
    NotCovered { state: String },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("certificate has no witness for high state `{high}`, low state `{low}`, command `{command}`")]
    MissingWitness {
        high: String,
        low: String,
        command: String,
    },

    #[error("malformed client tree: {0}")]
    MalformedClient(String),

    #[error("server table is partial: no response chosen for state `{state}`, command `{command}`")]
    ServerChoiceMissing { state: String, command: String },

    #[error("server leaves its invariant: state `{state}`, command `{command}`, response `{response}` leads to `{next}`")]
    ServerEscapesInvariant {
        state: String,
        command: String,
        response: String,
        next: String,
    },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("interaction structure is malformed: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
