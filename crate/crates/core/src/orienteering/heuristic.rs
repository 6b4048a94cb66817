//! GRASP-style orienteering heuristic.
//!
//! Each restart builds a path by randomized greedy insertion (restricted candidate list
//! on reward gained per unit of extra log cost), then improves it with local search:
//! segment reversal to shorten the route, best insertion, and drop-and-refill. The best
//! path over all restarts is returned. Restart `r` draws from ChaCha8 stream `r` of the
//! seed, so results depend only on `(problem, seed, restarts)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TsoError};
use crate::graph::{LogGraph, NodeId, Path, ShortestPaths, BUDGET_TOL};

use super::{better, tie_tolerance, OracleResult, OrienteeringProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicOptions {
    pub restarts: usize,
    /// Restricted candidate list width in `[0, 1]`; 0 is pure greedy.
    pub rcl_alpha: f64,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        HeuristicOptions { restarts: 64, rcl_alpha: 0.3 }
    }
}

pub fn solve_heuristic(p: &OrienteeringProblem<'_>, seed: u64, opts: HeuristicOptions) -> Result<OracleResult> {
    p.ensure_feasible()?;
    if opts.restarts == 0 {
        return Err(TsoError::Config("heuristic needs at least one restart".into()));
    }
    let mut h = Heuristic::new(p);
    let initial = h.initial_route().ok_or_else(|| TsoError::Infeasible("no route within budget".into()))?;

    let mut best: Option<(f64, Vec<NodeId>)> = None;
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        // the first restart is the deterministic greedy construction
        let alpha = if r == 0 { 0.0 } else { opts.rcl_alpha };
        let mut route = h.construct(initial.clone(), alpha, &mut rng);
        h.local_search(&mut route);
        let (reward, _) = h.eval(&route);
        let take = match &best {
            None => true,
            Some((br, bp)) => better(reward, &route, *br, bp),
        };
        if take {
            best = Some((reward, route));
        }
    }
    let (reward, nodes) = best.expect("at least one restart");
    Ok(OracleResult { path: Path::new(nodes), reward, exact: false, nodes_expanded: h.evaluations })
}

struct Heuristic<'p, 'g> {
    p: &'p OrienteeringProblem<'g>,
    lg: &'g LogGraph,
    budget: f64,
    trees: Vec<ShortestPaths>,
    evaluations: u64,
}

struct Insertion {
    route: Vec<NodeId>,
    gain: f64,
    extra_cost: f64,
}

impl<'p, 'g> Heuristic<'p, 'g> {
    fn new(p: &'p OrienteeringProblem<'g>) -> Self {
        let lg: &'g LogGraph = p.graph;
        let trees = (0..lg.node_count()).map(|s| lg.dijkstra(NodeId(s))).collect();
        Heuristic { p, lg, budget: lg.budget() + BUDGET_TOL, trees, evaluations: 0 }
    }

    fn eval(&mut self, route: &[NodeId]) -> (f64, f64) {
        self.evaluations += 1;
        self.p.evaluate(route).unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
    }

    /// Cheapest `v_s → v_t` path, or cheapest depot cycle.
    fn initial_route(&self) -> Option<Vec<NodeId>> {
        let s = self.lg.start();
        let t = self.lg.terminal();
        if s != t {
            return self.trees[s.index()].path_to(t);
        }
        let mut best: Option<(f64, Vec<NodeId>)> = None;
        for a in self.lg.out(s) {
            let Some(back) = self.trees[a.to.index()].path_to(s) else { continue };
            let c = a.cost + self.trees[a.to.index()].dist[s.index()];
            if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                let mut route = vec![s];
                route.extend(back);
                best = Some((c, route));
            }
        }
        best.map(|(_, r)| r)
    }

    /// Route with `j` spliced between positions `i` and `i + 1` via shortest paths, if
    /// the result is still a valid path.
    fn splice(&self, route: &[NodeId], i: usize, j: NodeId) -> Option<Vec<NodeId>> {
        let a = route[i];
        let b = route[i + 1];
        let first = self.trees[a.index()].path_to(j)?;
        let second = self.trees[j.index()].path_to(b)?;
        let mut out = Vec::with_capacity(route.len() + first.len() + second.len());
        out.extend_from_slice(&route[..=i]);
        out.extend_from_slice(&first[1..]);
        out.extend_from_slice(&second[1..second.len() - 1]);
        out.extend_from_slice(&route[i + 1..]);
        simple(&out).then_some(out)
    }

    fn insertions(&mut self, route: &[NodeId]) -> Vec<Insertion> {
        let (reward, cost) = self.eval(route);
        let mut on_route = vec![false; self.lg.node_count()];
        for &j in route {
            on_route[j.index()] = true;
        }
        let mut out = Vec::new();
        for j in 0..self.lg.node_count() {
            if on_route[j] {
                continue;
            }
            for i in 0..route.len() - 1 {
                let Some(cand) = self.splice(route, i, NodeId(j)) else { continue };
                let (r, c) = self.eval(&cand);
                if c <= self.budget && r > reward + tie_tolerance(reward) {
                    out.push(Insertion { route: cand, gain: r - reward, extra_cost: c - cost });
                }
            }
        }
        out
    }

    fn construct(&mut self, mut route: Vec<NodeId>, alpha: f64, rng: &mut ChaCha8Rng) -> Vec<NodeId> {
        loop {
            let cands = self.insertions(&route);
            if cands.is_empty() {
                return route;
            }
            let score = |c: &Insertion| c.gain / (c.extra_cost.max(0.0) + 1e-9);
            let scores: Vec<f64> = cands.iter().map(score).collect();
            let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
            let cut = hi - alpha * (hi - lo);
            let rcl: Vec<usize> = (0..cands.len()).filter(|&k| scores[k] >= cut).collect();
            let pick = if rcl.len() == 1 { rcl[0] } else { rcl[rng.gen_range(0..rcl.len())] };
            route = cands.into_iter().nth(pick).unwrap().route;
        }
    }

    fn local_search(&mut self, route: &mut Vec<NodeId>) {
        loop {
            let improved = self.two_opt(route) || self.best_insertion(route) || self.drop_and_refill(route);
            if !improved {
                return;
            }
        }
    }

    /// Reverses an interior segment when that lowers the cost without losing reward.
    fn two_opt(&mut self, route: &mut Vec<NodeId>) -> bool {
        let (reward, cost) = self.eval(route);
        let len = route.len();
        for i in 1..len.saturating_sub(2) {
            for k in i + 1..len - 1 {
                let mut cand = route.clone();
                cand[i..=k].reverse();
                let (r, c) = self.eval(&cand);
                if c <= self.budget && r >= reward - tie_tolerance(reward) && c < cost - 1e-12 {
                    *route = cand;
                    return true;
                }
            }
        }
        false
    }

    fn best_insertion(&mut self, route: &mut Vec<NodeId>) -> bool {
        let best = self
            .insertions(route)
            .into_iter()
            .max_by(|a, b| a.gain.total_cmp(&b.gain).then(b.extra_cost.total_cmp(&a.extra_cost)));
        match best {
            Some(ins) => {
                *route = ins.route;
                true
            }
            None => false,
        }
    }

    /// Removes one interior node, refills greedily, keeps the result if it is better.
    fn drop_and_refill(&mut self, route: &mut Vec<NodeId>) -> bool {
        let (reward, cost) = self.eval(route);
        for i in 1..route.len().saturating_sub(1) {
            let mut cand = route.clone();
            cand.remove(i);
            if self.lg.arc(cand[i - 1], cand[i]).is_none() {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let cand = self.construct(cand, 0.0, &mut rng);
            let (r, c) = self.eval(&cand);
            if c > self.budget {
                continue;
            }
            let tol = tie_tolerance(reward);
            if r > reward + tol || (r >= reward - tol && c < cost - 1e-12) {
                *route = cand;
                return true;
            }
        }
        false
    }
}

fn simple(route: &[NodeId]) -> bool {
    let last = route.len() - 1;
    let body = if last > 0 && route[0] == route[last] { &route[..last] } else { route };
    body.iter().enumerate().all(|(k, j)| !body[k + 1..].contains(j))
}
