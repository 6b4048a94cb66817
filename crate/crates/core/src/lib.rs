//! Planning teams of robots on graphs whose edges may destroy them.
//!
//! Each edge carries a survival probability. A plan is a set of `K` paths from a start
//! node to a terminal node, each of which must be completed with probability at least
//! `p_s`; the goal is to maximize the expected priority-weighted number of nodes that at
//! least one surviving robot reaches.
//!
//! - [`graph`]: instance model, log-cost transform, shortest paths, feasibility.
//! - [`objective`]: visit probabilities, the team objective and its variants.
//! - [`orienteering`]: exact and heuristic single-path oracles.
//! - [`greedy`]: the greedy team planner and its upper-bound certificate.
//! - [`exact_tso`]: exhaustive ground truth for small instances.
//! - [`simulate`]: Monte-Carlo estimate of a plan's value.

pub mod error;
pub mod exact_tso;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod objective;
pub mod orienteering;
pub mod simulate;

pub use error::{Result, TsoError};
pub use graph::{feasibility_check, LogGraph, NodeId, Path, SurvivalGraph, BUDGET_TOL};
pub use greedy::{compute_bounds, greedy_survivors, BoundCertificate, GreedyConfig, OracleKind, Variant};
pub use objective::{team_objective, TeamPlan};
