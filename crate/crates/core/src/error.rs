use thiserror::Error;

use crate::complex::FaceId;

/// Everything that can go wrong while building or analysing complexes and groups.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Corrupt input: ranks out of range, dangling ids, covers that skip ranks.
    #[error("malformed poset: {0}")]
    MalformedPoset(String),

    #[error("face {low} is not below face {high}")]
    NotComparable { low: FaceId, high: FaceId },

    #[error("rank {rank} out of range {min}..={max}")]
    RankOutOfRange { rank: i64, min: i64, max: i64 },

    /// A backtracking search hit its node budget before reaching an answer.
    #[error("search budget of {budget} nodes exceeded")]
    SearchBudgetExceeded { budget: u64 },

    /// A size cap (group order, flag count, vertex count, ...) was hit.
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("generator {index} does not lie in the group")]
    NotASubgroup { index: usize },

    #[error("operation requires an enumerated group")]
    RequiresEnumeration,

    #[error("group is not flag-transitive on the complex")]
    NotFlagTransitive,

    #[error("group is not transitive on {degree} points")]
    NotTransitive { degree: usize },

    #[error("complex is not vertex-describable")]
    NotVertexDescribable,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("property violated: {0}")]
    PropertyViolation(String),

    /// Coset enumeration did not close within the cap: the group is probably infinite.
    #[error("coset enumeration exceeded {cap} cosets; group possibly infinite")]
    InfiniteGroupSuspected { cap: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for the errors that mean "instance too large" rather than a wrong answer.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::SearchBudgetExceeded { .. } | Error::InfiniteGroupSuspected { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
