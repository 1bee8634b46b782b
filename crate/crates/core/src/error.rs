use thiserror::Error;

use crate::subset::Subset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order must be positive")]
    InvalidOrder,

    #[error("malformed table: {0}")]
    Malformed(String),

    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("table has no identity element")]
    NoIdentity,

    #[error("element {0} has no inverse")]
    NoInverse(usize),

    #[error("{what} has {size} points, more than the supported {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("invalid subset {set} of a {size}-point range: {reason}")]
    InvalidSubset {
        set: Subset,
        size: usize,
        reason: &'static str,
    },

    #[error("not a group action: {0}")]
    NotAnAction(String),

    #[error("element set {0} is not a subgroup")]
    NotASubgroup(Subset),

    #[error("axiom violation: {0}")]
    AxiomViolation(String),

    #[error("the group subset V must be nonempty")]
    InvalidOpenSet,

    #[error("set {0} is not open")]
    NotOpen(Subset),
}
