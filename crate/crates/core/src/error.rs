use thiserror::Error;

use crate::catalog::Category;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    #[error("malformed requirement: {0}")]
    MalformedRequirement(String),

    #[error("preference does not cover category {0}")]
    UncoveredCategory(Category),

    #[error("placement of `{object}` collides or is out of bounds")]
    Collision { object: String },

    #[error("invalid fridge state: {0}")]
    InvalidState(String),

    #[error("invalid demonstration: {0}")]
    InvalidDemonstration(String),

    #[error("instance with {0} objects is too large for exhaustive search")]
    IntractableInstance(usize),

    #[error("no collision-free placement exists for every task object")]
    NoFeasiblePlan,

    #[error("all likelihoods are zero; answer inconsistent with every candidate")]
    DegeneratePosterior,

    #[error("question pool is empty")]
    EmptyQuestionSet,

    #[error("cannot generate questions for identical preferences")]
    IdenticalPreferences,

    #[error("only {found} distinct consistent preferences exist, {needed} requested")]
    InsufficientCandidates { found: usize, needed: usize },

    #[error("answer error rate {0} outside [0, 0.5)")]
    InvalidAnswerModel(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("generation retries exhausted: {0}")]
    GenerationRetryExhausted(String),

    #[error("realization retries exhausted: {0}")]
    RealizationRetryExhausted(String),

    #[error("input aborted after {asked} answered questions")]
    InputAbort { asked: usize },

    #[error("malformed script: {0}")]
    MalformedScript(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
