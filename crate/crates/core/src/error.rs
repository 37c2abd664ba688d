use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("polynomials are defined over different variable tables")]
    VarTableMismatch,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("polynomial has degree {degree} in `{var}`, expected at most 1")]
    DegreeTooHigh { var: String, degree: u32 },

    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("slot {slot} out of range for {total} sites")]
    SlotOutOfRange { slot: usize, total: usize },

    #[error("slot {0} listed twice")]
    DuplicateSlot(usize),

    #[error("site {site} out of range for an operator on {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("matrix still has symbolic entries; evaluate it at a point first")]
    SymbolicEntries,

    #[error("generator `{0}` is not linear in any variable")]
    NotLinear(String),

    #[error("chain of {0} sites is too long (at most {1})")]
    ChainTooLong(usize, usize),

    #[error("lattice too large for exhaustive enumeration: {0}")]
    LatticeTooLarge(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
