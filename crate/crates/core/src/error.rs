use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative input {0} to integer square root")]
    NegativeSqrt(String),
    #[error("divisor enumeration of zero")]
    ZeroDivisors,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("enumeration of {requested} items exceeds budget {budget}")]
    Budget { requested: u128, budget: u128 },
    #[error("map x^2 + {c} is excluded: c must not be 0 or -1")]
    DegenerateMap { c: String },
    #[error("no positive canonical height found in box |a| <= {bound}; enlarge box or iterations")]
    NoPositiveHeight { bound: String },
    #[error("malformed registry: {0}")]
    Registry(String),
    #[error("lemma {id} is not tagged {tag}")]
    TagMismatch { id: String, tag: String },
    #[error("unknown lemma id {0}")]
    UnknownLemma(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}
