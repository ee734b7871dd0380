use thiserror::Error;

/// Errors surfaced by instance validation, verifiers, and solvers.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("incomplete allocation")]
    IncompleteAllocation,

    #[error("requires identical valuations")]
    IdenticalValuationsRequired,

    #[error("requires exactly {expected} agents, instance has {got}")]
    WrongAgentCount { expected: usize, got: usize },

    #[error("at most {max} agents supported by this solver, instance has {got}")]
    TooManyAgents { max: usize, got: usize },

    #[error("requires at least {min} agents, instance has {got}")]
    NotEnoughAgents { min: usize, got: usize },

    #[error("requires unit edge weights; use the degree or cyclic solver for weighted instances")]
    UnitWeightsRequired,

    #[error("graph is not a union of cliques")]
    NotCliqueUnion,

    #[error("oracle size limit")]
    OracleSizeLimit,

    #[error("category must contain exactly {expected} unassigned goods, got {got}")]
    BadCategory { expected: usize, got: usize },

    #[error("good {0} is already assigned")]
    GoodAlreadyAssigned(usize),

    #[error("coordinate out of range")]
    CoordinateOutOfRange,

    #[error("unknown point id {0}")]
    UnknownPoint(u64),

    #[error("duplicate point id {0}")]
    DuplicatePoint(u64),

    #[error("internal: envy graph not acyclic")]
    EnvyGraphNotAcyclic,

    #[error("internal: no grid cell holds a full group")]
    NoHeavyCell,

    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    /// True for invariant breaches that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::EnvyGraphNotAcyclic | Error::NoHeavyCell | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
