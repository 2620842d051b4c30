use serde::{Deserialize, Serialize};

/// Malformed input: unreadable files, bad JSON, or tables of the wrong shape.
/// Distinct from an axiom failure on well-formed data.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("carrier is empty")]
    Empty,
    #[error("carrier has {size} elements, at most {max} supported")]
    TooLarge { size: usize, max: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("element index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("{0} has the wrong dimensions")]
    DimensionMismatch(&'static str),
    #[error("product {0}·{1} is not given")]
    MissingProduct(String, String),
    #[error("product {0}·{1} is given twice with different values")]
    ConflictingProduct(String, String),
}

/// A check that a proven theorem guarantees came out false.
///
/// This always indicates either a bug in this crate or a genuine discrepancy
/// with the underlying mathematics, never an ordinary negative verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("oracle violation in {check}: {detail}")]
pub struct OracleViolation {
    pub check: String,
    pub detail: String,
}

impl OracleViolation {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        OracleViolation {
            check: check.into(),
            detail: detail.into(),
        }
    }
}
