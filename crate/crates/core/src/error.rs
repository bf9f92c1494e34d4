use std::path::PathBuf;

use thiserror::Error;

use crate::temporal_net::{NodeId, Time};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("event at t={time} precedes the last appended event at t={last}")]
    TimeRegression { time: Time, last: Time },

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("node {node} born at t={birth} cannot take part in an event at t={time}")]
    BornAfterEvent {
        node: NodeId,
        birth: Time,
        time: Time,
    },

    #[error("invalid time range [{start}, {end}]")]
    InvalidRange { start: Time, end: Time },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: u64,
        msg: String,
    },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid alias map: {0}")]
    AliasConflict(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("degenerate bin {bin}: zero exposure denominator")]
    DegenerateBin { bin: usize },

    #[error("network has no selection events to estimate from")]
    NoSelections,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("node {0} is not covered by the estimation result")]
    Coverage(NodeId),

    #[error("no active nodes at time {0}")]
    NoActiveNodes(Time),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::DegenerateBin { .. }
            | Error::NoSelections
            | Error::InsufficientData(_) => 3,
            _ => 2,
        }
    }
}
