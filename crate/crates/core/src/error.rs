use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("closure exceeds the enumeration cap of {cap} elements")]
    ClosureExceedsCap { cap: usize },
    #[error("not a subgroup of the ambient group")]
    NotASubgroup,
    #[error("group of order {order} exceeds the bound {bound} for this operation")]
    BoundExceeded { order: usize, bound: usize },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("map {map} is not available on this group: {reason}")]
    IncompatibleGroup { map: String, reason: String },
    #[error("cannot resolve element `{0}`")]
    UnknownElement(String),
    #[error("connection set is not inverse-closed (missing inverse of `{0}`)")]
    NotInverseClosed(String),
    #[error("connection set contains the identity")]
    ContainsIdentity,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("action is not edge-regular: {0}")]
    NotEdgeRegular(String),
    #[error("action is not arc-regular: {0}")]
    NotArcRegular(String),
    #[error("local group is not regular on the neighbourhood")]
    NotRegular,
    #[error("colour-preserving vertex stabiliser exceeds {cap} elements")]
    StabiliserTooLarge { cap: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("decomposition not found: {0}")]
    DecompositionNotFound(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Errors that report a violated mathematical precondition of the
    /// caller's input, as opposed to resource limits or internal faults.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::NotASubgroup
                | Error::InvalidSpec(_)
                | Error::IncompatibleGroup { .. }
                | Error::UnknownElement(_)
                | Error::NotInverseClosed(_)
                | Error::ContainsIdentity
                | Error::NotNormal
                | Error::NotConnected
                | Error::NotSimple(_)
                | Error::NotEdgeRegular(_)
                | Error::NotArcRegular(_)
                | Error::NotRegular
                | Error::HypothesisViolated(_)
                | Error::HypothesesNotMet(_)
        )
    }
}
