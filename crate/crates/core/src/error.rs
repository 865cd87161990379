use thiserror::Error;

/// Errors raised by the arithmetic layer, the geometry models and the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate specialization")]
    DegenerateSpecialization,
    #[error("not Laurent: {0}")]
    NotLaurent(String),
    #[error("non-invertible insertion")]
    NonInvertibleInsertion,
    #[error("unstable moduli problem")]
    UnstableModuli,
    #[error("vanishing flag weight")]
    VanishingFlagWeight,
    #[error("weight dependence detected: {0}")]
    WeightDependence(String),
    #[error("no nonequivariant limit")]
    NoNonequivariantLimit,
    #[error("bundle is not globally generated (twists {0:?})")]
    NotGloballyGenerated(Vec<i64>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("assembly inconsistency: {0}")]
    Assembly(String),
}

pub type Result<T> = std::result::Result<T, Error>;
