//! Depth-first branch and bound over simple paths.
//!
//! A partial path ending at `u` with cost `c` is cut when
//!   (a) `c + dist(u, v_t) > B`, or
//!   (b) an optimistic estimate of its best completion cannot beat the incumbent.
//! The estimate for (b) is the smaller of two admissible bounds: the sum of every
//! reward still reachable within the remaining budget, and a fractional knapsack over
//! the same rewards where each costs at least its cheapest entering edge.

use std::cmp::Ordering;

use crate::error::{Result, TsoError};
use crate::graph::{LogEdge, LogGraph, NodeId, Path, BUDGET_TOL};

use super::{better, tie_tolerance, OracleResult, OrienteeringProblem, Rewards};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Enables pruning rule (b). Disabling it leaves only the budget cut.
    pub reward_pruning: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { reward_pruning: true }
    }
}

/// Proven-optimal orienteering path (node or arc rewards).
///
/// Among maximizers the lexicographically smallest node sequence wins.
pub fn solve_exact(p: &OrienteeringProblem<'_>) -> Result<OracleResult> {
    solve_exact_with(p, ExactOptions::default())
}

/// Exact solver for rewards placed on edges.
pub fn solve_arc_exact(p: &OrienteeringProblem<'_>) -> Result<OracleResult> {
    if !matches!(p.rewards(), Rewards::Arcs(_)) {
        return Err(TsoError::Config("arc orienteering needs edge rewards".into()));
    }
    solve_exact(p)
}

pub fn solve_exact_with(p: &OrienteeringProblem<'_>, opts: ExactOptions) -> Result<OracleResult> {
    p.ensure_feasible()?;
    let mut search = Search::new(p, opts);
    let start = p.graph().start();
    search.path.push(start);
    search.on_path[start.index()] = true;
    search.dfs(start, 0.0, 0.0);
    let expanded = search.expanded;
    let (reward, nodes) = search
        .best
        .ok_or_else(|| TsoError::Infeasible("no path satisfies the budget".into()))?;
    Ok(OracleResult { path: Path::new(nodes), reward, exact: true, nodes_expanded: expanded })
}

struct ArcItem {
    from: NodeId,
    to: NodeId,
    cost: f64,
    reward: f64,
}

struct Search<'p, 'g> {
    p: &'p OrienteeringProblem<'g>,
    budget: f64,
    terminal: NodeId,
    to_terminal: Vec<f64>,
    dist: Vec<Vec<f64>>,
    min_in: Vec<f64>,
    // rewarded nodes by decreasing reward / entry cost
    node_items: Vec<NodeId>,
    arc_items: Vec<ArcItem>,
    children: Vec<Vec<LogEdge>>,
    path: Vec<NodeId>,
    on_path: Vec<bool>,
    best: Option<(f64, Vec<NodeId>)>,
    expanded: u64,
    opts: ExactOptions,
}

fn ratio(gain: f64, cost: f64) -> f64 {
    if cost > 0.0 {
        gain / cost
    } else if gain > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

impl<'p, 'g> Search<'p, 'g> {
    fn new(p: &'p OrienteeringProblem<'g>, opts: ExactOptions) -> Self {
        let lg: &'g LogGraph = p.graph;
        let n = lg.node_count();
        let terminal = lg.terminal();
        let to_terminal = lg.distances_to(terminal);
        let dist = if opts.reward_pruning { lg.all_pairs() } else { Vec::new() };
        let min_in: Vec<f64> = (0..n)
            .map(|v| lg.incoming(NodeId(v)).iter().map(|a| a.cost).fold(f64::INFINITY, f64::min))
            .collect();

        let mut node_items = Vec::new();
        let mut arc_items = Vec::new();
        match p.rewards() {
            Rewards::Nodes(nu) => {
                node_items = (0..n)
                    .filter(|&j| nu[j] > 0.0 && NodeId(j) != terminal)
                    .map(NodeId)
                    .collect();
                node_items.sort_by(|a, b| {
                    ratio(nu[b.0], min_in[b.0])
                        .total_cmp(&ratio(nu[a.0], min_in[a.0]))
                        .then(a.cmp(b))
                });
            }
            Rewards::Arcs(nu) => {
                for u in 0..n {
                    for a in lg.out(NodeId(u)) {
                        if nu[a.edge] > 0.0 {
                            arc_items.push(ArcItem { from: NodeId(u), to: a.to, cost: a.cost, reward: nu[a.edge] });
                        }
                    }
                }
                arc_items.sort_by(|x, y| {
                    ratio(y.reward, y.cost)
                        .total_cmp(&ratio(x.reward, x.cost))
                        .then((x.from, x.to).cmp(&(y.from, y.to)))
                });
            }
        }

        let children = (0..n)
            .map(|u| {
                let mut out = lg.out(NodeId(u)).to_vec();
                out.sort_by(|x, y| {
                    ratio(p.step_reward(y.to, y.edge), y.cost)
                        .total_cmp(&ratio(p.step_reward(x.to, x.edge), x.cost))
                        .then(x.to.cmp(&y.to))
                });
                out
            })
            .collect();

        Search {
            p,
            budget: lg.budget(),
            terminal,
            to_terminal,
            dist,
            min_in,
            node_items,
            arc_items,
            children,
            path: Vec::with_capacity(n + 1),
            on_path: vec![false; n],
            best: None,
            expanded: 0,
            opts,
        }
    }

    fn dfs(&mut self, u: NodeId, cost: f64, reward: f64) {
        self.expanded += 1;
        for k in 0..self.children[u.index()].len() {
            let arc = self.children[u.index()][k];
            let v = arc.to;
            let next_cost = cost + arc.cost;
            if next_cost > self.budget + BUDGET_TOL {
                continue;
            }
            let next_reward = reward + self.p.step_reward(v, arc.edge);
            if v == self.terminal {
                self.path.push(v);
                self.offer(next_reward);
                self.path.pop();
                continue;
            }
            if self.on_path[v.index()] || next_cost + self.to_terminal[v.index()] > self.budget + BUDGET_TOL {
                continue;
            }
            self.path.push(v);
            self.on_path[v.index()] = true;
            if !self.prunable(v, next_cost, next_reward) {
                self.dfs(v, next_cost, next_reward);
            }
            self.on_path[v.index()] = false;
            self.path.pop();
        }
    }

    fn offer(&mut self, reward: f64) {
        let accept = match &self.best {
            None => true,
            Some((r, p)) => better(reward, &self.path, *r, p),
        };
        if accept {
            self.best = Some((reward, self.path.clone()));
        }
    }

    fn prunable(&self, v: NodeId, cost: f64, reward: f64) -> bool {
        if !self.opts.reward_pruning {
            return false;
        }
        let Some((best, best_path)) = &self.best else {
            return false;
        };
        let bound = self.bound(v, cost, reward);
        let tol = tie_tolerance(*best);
        match prefix_order(&self.path, best_path) {
            // every completion sorts after the incumbent, so a tie cannot win
            Some(Ordering::Greater) => bound <= best + tol,
            _ => bound < best - tol,
        }
    }

    fn bound(&self, v: NodeId, cost: f64, reward: f64) -> f64 {
        let remaining = self.budget - cost + BUDGET_TOL;
        let dist_v = &self.dist[v.index()];
        match self.p.rewards() {
            Rewards::Nodes(nu) => {
                let t = self.terminal.index();
                let mut capacity = remaining - self.min_in[t];
                let mut reach = 0.0;
                let mut knap = 0.0;
                let mut knap_full = false;
                for &j in &self.node_items {
                    let jx = j.index();
                    if self.on_path[jx] || dist_v[jx] + self.to_terminal[jx] > remaining {
                        continue;
                    }
                    reach += nu[jx];
                    if knap_full {
                        continue;
                    }
                    let w = self.min_in[jx];
                    if w <= capacity {
                        knap += nu[jx];
                        capacity -= w;
                    } else {
                        knap += nu[jx] * (capacity.max(0.0) / w);
                        knap_full = true;
                    }
                }
                reward + nu[t] + reach.min(knap)
            }
            Rewards::Arcs(_) => {
                let mut capacity = remaining;
                let mut reach = 0.0;
                let mut knap = 0.0;
                let mut knap_full = false;
                for item in &self.arc_items {
                    let (i, j) = (item.from.index(), item.to.index());
                    if (self.on_path[i] && item.from != v) || (self.on_path[j] && item.to != self.terminal) {
                        continue;
                    }
                    if dist_v[i] + item.cost + self.to_terminal[j] > remaining {
                        continue;
                    }
                    reach += item.reward;
                    if knap_full {
                        continue;
                    }
                    if item.cost <= capacity {
                        knap += item.reward;
                        capacity -= item.cost;
                    } else {
                        knap += item.reward * (capacity.max(0.0) / item.cost);
                        knap_full = true;
                    }
                }
                reward + reach.min(knap)
            }
        }
    }
}

/// How every completion of `prefix` compares with `best`, if that is already decided.
fn prefix_order(prefix: &[NodeId], best: &[NodeId]) -> Option<Ordering> {
    prefix
        .iter()
        .zip(best)
        .map(|(a, b)| a.cmp(b))
        .find(|o| *o != Ordering::Equal)
}
