use thiserror::Error;

use crate::graph::{NodeId, Violation};

#[derive(Debug, Error)]
pub enum TsoError {
    #[error("invalid instance: {}", format_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("no edge from node {from} to node {to}")]
    MissingEdge { from: NodeId, to: NodeId },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    /// The feasible path set is empty (or an oracle found no path within budget).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A hard size limit on an exhaustive routine was exceeded.
    #[error("guard violation: {0}")]
    Guard(String),

    #[error("invalid multi-visit table: {0}")]
    MultiVisit(String),

    #[error("invalid edge reward: {0}")]
    EdgeReward(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = TsoError> = std::result::Result<T, E>;
