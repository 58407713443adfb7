use thiserror::Error;

/// Errors surfaced by the engine. Axiom violations carry a concrete witness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multiplication not associative at witness ({a}, {b}, {c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element 0 is not a two-sided identity, witness element {witness}")]
    NoIdentity { witness: usize },
    #[error("element {element} has no two-sided inverse")]
    InverseMissing { element: usize },
    #[error("group order {order} exceeds configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("enumeration of size {size} exceeds configured bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("span composition mismatch: {0}")]
    SourceTargetMismatch(String),
    #[error("not nested: {0}")]
    NotNested(String),
    #[error("subgroup {0} is not normal")]
    NotNormal(String),
    #[error("shape unsupported: operation needs {required}, complex is {found}")]
    ShapeUnsupported { required: String, found: String },
    #[error("operation requires a field, got {0}")]
    FieldRequired(String),
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
