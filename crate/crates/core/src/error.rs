use alloc::string::String;

use crate::graph::VertexId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} does not exist or is not alive")]
    VertexNotAlive(VertexId),
    #[error("vertex {0} is not in the removal ledger")]
    NotRemoved(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} does not exist")]
    EdgeNotFound(VertexId, VertexId),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no connected graph after {attempts} attempts; parameters are too sparse")]
    ConnectivityRetryExhausted { attempts: usize },
    #[error("graph is disconnected")]
    DisconnectedInput,
    #[error("graph has no candidate components")]
    EmptyGraph,
    #[error("metric needs at least {needed} vertices, graph has {found}")]
    TooFewVertices { needed: usize, found: usize },
    #[error("malformed attack profile token {0:?}; expected [DBC]-[EV]-[LH]")]
    MalformedProfile(String),
    #[error("attack profile {0} is not a valid combination")]
    InvalidCombination(String),
    #[error("shot limit reached after {shots} shots without disconnecting the graph")]
    ShotLimitExceeded { shots: usize },
    #[error("USW repair requires the graph's construction parameters")]
    MissingUswParams,
}
