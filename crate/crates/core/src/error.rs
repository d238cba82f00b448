use thiserror::Error;

/// Errors produced by the planning library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty formation")]
    EmptyFormation,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("invalid optimizer configuration: {0}")]
    Config(String),

    #[error("angle vector has length {actual}, expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("path endpoints do not match the scenario: {0}")]
    EndpointMismatch(String),

    #[error("path must contain at least one free waypoint between start and target")]
    TooFewWaypoints,

    #[error("invalid simulation settings: {0}")]
    Simulation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
