use thiserror::Error;

/// Errors raised by the group, commutator, character and audit layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group closure exceeds the order cap of {cap}")]
    ClosureTooLarge { cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unknown group family `{0}`")]
    UnknownFamily(String),

    #[error("malformed group spec `{spec}`: {reason}")]
    GroupSpec { spec: String, reason: String },

    #[error("malformed subgroup spec `{spec}`: {reason}")]
    SubgroupSpec { spec: String, reason: String },

    #[error("element id {id} out of range for a group of order {order}")]
    InvalidElement { id: usize, order: usize },

    #[error("subgroup does not belong to this group")]
    ForeignSubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("the trivial group has no prime divisor")]
    TrivialGroup,

    #[error("left-normed commutator of an empty tuple")]
    EmptyTuple,

    #[error("weights must be at least 1 (got n = {n}, m = {m})")]
    InvalidWeight { n: usize, m: usize },

    #[error("brute enumeration needs {needed} tuples, cap is {cap}")]
    BruteCapExceeded { needed: u128, cap: u128 },

    #[error("operation requires K to be the full group")]
    RequiresFullGroup,

    #[error("malformed group table: {0}")]
    InvalidTable(String),

    #[error("eigenbasis stayed degenerate after {attempts} attempts")]
    DegenerateEigenbasis { attempts: usize },

    #[error("numeric tolerance exceeded: {0}")]
    ToleranceExceeded(String),

    #[error("imaginary residue {residue:e} exceeds tolerance")]
    ImaginaryResidue { residue: f64 },

    #[error("counting function is not constant on conjugacy class {class}")]
    NonClassFunction { class: usize },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("character table does not match the group: {0}")]
    TableMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
