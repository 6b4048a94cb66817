//! Brute-force reference implementations shared by the integration tests.
//!
//! None of these call the library's shortest-path, objective or search code; they only
//! read the instance through `SurvivalGraph` accessors.

#![allow(dead_code)]

use tso_core::graph::{NodeId, SurvivalGraph};

pub fn ids(v: &[usize]) -> Vec<NodeId> {
    v.iter().map(|&x| NodeId(x)).collect()
}

fn omega(g: &SurvivalGraph, a: NodeId, b: NodeId) -> f64 {
    g.edges()
        .iter()
        .find(|e| e.from == a && e.to == b)
        .map(|e| e.survival)
        .expect("edge exists")
}

pub fn survival(g: &SurvivalGraph, path: &[NodeId]) -> f64 {
    path.windows(2).map(|w| omega(g, w[0], w[1])).product()
}

pub fn log_cost(g: &SurvivalGraph, path: &[NodeId]) -> f64 {
    path.windows(2).map(|w| -omega(g, w[0], w[1]).ln()).sum()
}

/// Every simple route from the start to the terminal (a depot route may close on the
/// start). Routes stop at the terminal.
pub fn all_routes(g: &SurvivalGraph) -> Vec<Vec<NodeId>> {
    fn go(g: &SurvivalGraph, stack: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let u = *stack.last().unwrap();
        for e in g.edges().iter().filter(|e| e.from == u) {
            if e.to == g.terminal() {
                let mut p = stack.clone();
                p.push(e.to);
                out.push(p);
            } else if !stack.contains(&e.to) {
                stack.push(e.to);
                go(g, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![g.start()], &mut out);
    out.sort();
    out
}

pub fn within_budget(g: &SurvivalGraph, path: &[NodeId]) -> bool {
    log_cost(g, path) <= -g.p_s().ln() + 1e-9
}

pub fn feasible_routes(g: &SurvivalGraph) -> Vec<Vec<NodeId>> {
    all_routes(g).into_iter().filter(|p| within_budget(g, p)).collect()
}

/// Cheapest log cost from `source` to every node over all simple paths.
pub fn min_costs(g: &SurvivalGraph, source: NodeId) -> Vec<f64> {
    fn go(g: &SurvivalGraph, stack: &mut Vec<NodeId>, cost: f64, best: &mut [f64]) {
        let u = *stack.last().unwrap();
        best[u.index()] = best[u.index()].min(cost);
        for e in g.edges().iter().filter(|e| e.from == u) {
            if !stack.contains(&e.to) {
                stack.push(e.to);
                go(g, stack, cost - e.survival.ln(), best);
                stack.pop();
            }
        }
    }
    let mut best = vec![f64::INFINITY; g.node_count()];
    go(g, &mut vec![source], 0.0, &mut best);
    best
}

/// Per-robot outcome: number of edges survived (`len` means it completed the path) and
/// the probability of that outcome.
fn outcomes(g: &SurvivalGraph, path: &[NodeId]) -> Vec<(usize, f64)> {
    let len = path.len() - 1;
    let mut out = Vec::with_capacity(len + 1);
    let mut alive = 1.0;
    for m in 0..len {
        let w = omega(g, path[m], path[m + 1]);
        out.push((m, alive * (1.0 - w)));
        alive *= w;
    }
    out.push((len, alive));
    out
}

/// What the team achieved in one joint outcome.
pub struct Realization {
    pub node_visits: Vec<usize>,
    /// Traversal counts keyed by `(from, to)` index pairs.
    pub edge_visits: Vec<((usize, usize), usize)>,
}

/// `E[value(realization)]` by enumerating every joint survival outcome of the team.
pub fn joint_expectation<F>(g: &SurvivalGraph, paths: &[Vec<NodeId>], value: F) -> f64
where
    F: Fn(&Realization) -> f64,
{
    let per_robot: Vec<Vec<(usize, f64)>> = paths.iter().map(|p| outcomes(g, p)).collect();
    let mut total = 0.0;
    let mut choice = vec![0usize; paths.len()];
    loop {
        let mut prob = 1.0;
        let mut node_visits = vec![0usize; g.node_count()];
        let mut edge_visits: Vec<((usize, usize), usize)> = Vec::new();
        for (r, &c) in choice.iter().enumerate() {
            let (survived, p) = per_robot[r][c];
            prob *= p;
            for n in 1..=survived {
                let (a, b) = (paths[r][n - 1].index(), paths[r][n].index());
                node_visits[b] += 1;
                match edge_visits.iter_mut().find(|(k, _)| *k == (a, b)) {
                    Some((_, c)) => *c += 1,
                    None => edge_visits.push(((a, b), 1)),
                }
            }
        }
        total += prob * value(&Realization { node_visits, edge_visits });
        // odometer increment
        let mut r = 0;
        loop {
            if r == paths.len() {
                return total;
            }
            choice[r] += 1;
            if choice[r] < per_robot[r].len() {
                break;
            }
            choice[r] = 0;
            r += 1;
        }
    }
}

/// Expected priority-weighted number of distinct nodes visited.
pub fn team_value(g: &SurvivalGraph, paths: &[Vec<NodeId>]) -> f64 {
    let d = g.priorities().to_vec();
    joint_expectation(g, paths, |r| {
        r.node_visits.iter().zip(&d).filter(|(c, _)| **c > 0).map(|(_, d)| d).sum()
    })
}

/// Best single route for node rewards collected at steps `n ≥ 1`.
pub fn best_route_reward(g: &SurvivalGraph, rewards: &[f64]) -> Option<f64> {
    feasible_routes(g)
        .iter()
        .map(|p| p[1..].iter().map(|j| rewards[j.index()]).sum::<f64>())
        .max_by(f64::total_cmp)
}

/// Best single route for rewards on edges, keyed by `(from, to)` index pairs.
pub fn best_route_arc_reward(g: &SurvivalGraph, reward: impl Fn(usize, usize) -> f64) -> Option<f64> {
    feasible_routes(g)
        .iter()
        .map(|p| p.windows(2).map(|w| reward(w[0].index(), w[1].index())).sum::<f64>())
        .max_by(f64::total_cmp)
}

/// Optimal team value over all ordered `k`-tuples of feasible routes.
pub fn best_team_value(g: &SurvivalGraph, k: usize) -> f64 {
    let routes = feasible_routes(g);
    let mut best = f64::NEG_INFINITY;
    let mut choice = vec![0usize; k];
    loop {
        let team: Vec<Vec<NodeId>> = choice.iter().map(|&i| routes[i].clone()).collect();
        best = best.max(team_value(g, &team));
        let mut r = 0;
        loop {
            if r == k {
                return best;
            }
            choice[r] += 1;
            if choice[r] < routes.len() {
                break;
            }
            choice[r] = 0;
            r += 1;
        }
    }
}

/// Distribution of the number of successes by enumerating all `2^n` outcomes.
pub fn success_count_distribution(probs: &[f64]) -> Vec<f64> {
    let n = probs.len();
    let mut dist = vec![0.0; n + 1];
    for mask in 0u32..(1 << n) {
        let mut p = 1.0;
        for (i, q) in probs.iter().enumerate() {
            p *= if mask & (1 << i) != 0 { *q } else { 1.0 - q };
        }
        dist[mask.count_ones() as usize] += p;
    }
    dist
}
