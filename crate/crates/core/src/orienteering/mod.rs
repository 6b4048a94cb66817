//! Orienteering oracles on the log-cost graph.
//!
//! Given non-negative rewards on nodes (or on edges, for the arc variant), find a path
//! from `v_s` to `v_t` whose summed log cost stays within the budget `-ln p_s` and whose
//! collected reward is as large as possible. Rewards are collected at steps `n ≥ 1`, so
//! the start node only pays out when it is also the terminal.

mod exact;
mod heuristic;

pub use exact::{solve_arc_exact, solve_exact, solve_exact_with, ExactOptions};
pub use heuristic::{solve_heuristic, HeuristicOptions};

use std::cmp::Ordering;

use crate::error::{Result, TsoError};
use crate::graph::{LogGraph, NodeId, Path, BUDGET_TOL};

/// What the oracle is paid for.
#[derive(Debug, Clone, PartialEq)]
pub enum Rewards {
    /// `ν(j)` per node.
    Nodes(Vec<f64>),
    /// `ν(e)` per edge, indexed like [`crate::graph::SurvivalGraph::edges`].
    Arcs(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct OrienteeringProblem<'a> {
    graph: &'a LogGraph,
    rewards: Rewards,
}

impl<'a> OrienteeringProblem<'a> {
    pub fn new(graph: &'a LogGraph, rewards: Rewards) -> Result<Self> {
        let (len, expected, what) = match &rewards {
            Rewards::Nodes(v) => (v.len(), graph.node_count(), "node"),
            Rewards::Arcs(v) => {
                let edges = (0..graph.node_count())
                    .map(|u| graph.out(NodeId(u)).len())
                    .sum::<usize>();
                (v.len(), edges, "edge")
            }
        };
        if len != expected {
            return Err(TsoError::Config(format!(
                "{what} reward vector has {len} entries, expected {expected}"
            )));
        }
        let values = match &rewards {
            Rewards::Nodes(v) | Rewards::Arcs(v) => v,
        };
        if values.iter().any(|&r| !(r >= 0.0) || !r.is_finite()) {
            return Err(TsoError::Config("rewards must be finite and non-negative".into()));
        }
        Ok(OrienteeringProblem { graph, rewards })
    }

    pub fn nodes(graph: &'a LogGraph, rewards: Vec<f64>) -> Result<Self> {
        Self::new(graph, Rewards::Nodes(rewards))
    }

    pub fn arcs(graph: &'a LogGraph, rewards: Vec<f64>) -> Result<Self> {
        Self::new(graph, Rewards::Arcs(rewards))
    }

    pub fn graph(&self) -> &LogGraph {
        self.graph
    }

    pub fn rewards(&self) -> &Rewards {
        &self.rewards
    }

    pub fn budget(&self) -> f64 {
        self.graph.budget()
    }

    /// Reward collected by stepping `from → to`.
    #[inline]
    pub(crate) fn step_reward(&self, to: NodeId, edge: usize) -> f64 {
        match &self.rewards {
            Rewards::Nodes(v) => v[to.index()],
            Rewards::Arcs(v) => v[edge],
        }
    }

    /// Collected reward and log cost of `path`, or `None` if a step is not an edge.
    pub fn evaluate(&self, path: &[NodeId]) -> Option<(f64, f64)> {
        let mut reward = 0.0;
        let mut cost = 0.0;
        for w in path.windows(2) {
            let arc = self.graph.arc(w[0], w[1])?;
            reward += self.step_reward(w[1], arc.edge);
            cost += arc.cost;
        }
        Some((reward, cost))
    }

    pub(crate) fn ensure_feasible(&self) -> Result<()> {
        let c = self.graph.shortest_route_cost();
        if c <= self.budget() + BUDGET_TOL {
            Ok(())
        } else {
            Err(TsoError::Infeasible(format!(
                "cheapest route costs {c:.6} in log units, budget is {:.6}",
                self.budget()
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub path: Path,
    pub reward: f64,
    /// True when the reward is a proven maximum.
    pub exact: bool,
    pub nodes_expanded: u64,
}

/// Relative slack under which two rewards count as tied.
pub(crate) fn tie_tolerance(reference: f64) -> f64 {
    1e-12 * reference.abs().max(f64::MIN_POSITIVE)
}

/// Ordering used to pick between candidate paths: higher reward first, then the
/// lexicographically smaller node sequence among (near-)ties.
pub(crate) fn better(reward: f64, path: &[NodeId], best_reward: f64, best_path: &[NodeId]) -> bool {
    let tol = tie_tolerance(best_reward.max(reward));
    if reward > best_reward + tol {
        return true;
    }
    if reward < best_reward - tol {
        return false;
    }
    path.cmp(best_path) == Ordering::Less
}
