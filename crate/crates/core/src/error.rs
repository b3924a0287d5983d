use alloc::string::String;

use crate::notation::ParseError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid payoff matrix: {0}")]
    InvalidPayoffs(String),
    #[error("invalid game parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("strategy for {expected} was given an automaton owned by {found}")]
    OwnerMismatch { expected: String, found: String },
    #[error("joint chain for profile {profile} exceeds the cap of {cap} states")]
    StateCapExceeded { profile: String, cap: usize },
    #[error("unknown closed-form formula `{0}`")]
    UnknownFormula(String),
    #[error("closed forms assume symmetric matching (match probability 1/2), got {0}")]
    AsymmetricMatching(String),
    #[error("no interior threshold in (0,1): gain near 0 is {near_zero}, gain near 1 is {near_one}")]
    NoInteriorThreshold { near_zero: String, near_one: String },
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(String),
    #[error("epsilon sequence must be strictly decreasing")]
    EpsilonNotDecreasing,
    #[error("horizon {horizon} is shorter than the observation ({stages} stages)")]
    HorizonTooShort { horizon: usize, stages: usize },
    #[error("observation {0} has zero probability")]
    Unreachable(String),
    #[error("{0}")]
    Invalid(String),
}
