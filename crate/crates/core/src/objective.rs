//! Probabilistic semantics of team plans.
//!
//! A robot on path `ρ` is alive after step `n` with probability
//! `E[a_n] = Π_{i ≤ n} ω(e_i)`. It visits node `j` when it arrives there alive, so
//! `E[z_j(ρ)] = E[a_n]` at the step `n ≥ 1` with `ρ(n) = j`. Robots fail independently,
//! hence node `j` is covered by the team with probability `1 - Π_k (1 - E[z_j(ρ_k)])`.

use crate::error::{Result, TsoError};
use crate::graph::{NodeId, Path, SurvivalGraph};

/// Survival prefix and per-node visit probabilities of a single path.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitProfile {
    pub path: Path,
    /// `E[a_n]` for `n = 0..=|ρ|`.
    pub survival_prefix: Vec<f64>,
    /// `E[z_j(ρ)]` for every node `j`.
    pub visit_prob: Vec<f64>,
    /// `E[a_n]` just after traversing each step, keyed by edge index.
    pub edge_visits: Vec<(usize, f64)>,
}

impl VisitProfile {
    /// Probability of completing the whole path.
    pub fn survival(&self) -> f64 {
        *self.survival_prefix.last().unwrap_or(&1.0)
    }

    /// `Σ_j w_j E[z_j(ρ)]`.
    pub fn weighted_visits(&self, weights: &[f64]) -> f64 {
        self.visit_prob.iter().zip(weights).map(|(z, w)| z * w).sum()
    }
}

pub fn visit_profile(g: &SurvivalGraph, path: &Path) -> Result<VisitProfile> {
    path.check(g)?;
    let mut survival_prefix = Vec::with_capacity(path.nodes().len());
    let mut visit_prob = vec![0.0; g.node_count()];
    let mut edge_visits = Vec::with_capacity(path.edge_count());
    let mut alive = 1.0;
    survival_prefix.push(alive);
    for (a, b) in path.steps() {
        let e = g.edge_index(a, b).ok_or(TsoError::MissingEdge { from: a, to: b })?;
        alive *= g.edges()[e].survival;
        survival_prefix.push(alive);
        edge_visits.push((e, alive));
        visit_prob[b.index()] = alive;
    }
    Ok(VisitProfile { path: path.clone(), survival_prefix, visit_prob, edge_visits })
}

pub fn profiles(g: &SurvivalGraph, paths: &[Path]) -> Result<Vec<VisitProfile>> {
    paths.iter().map(|p| visit_profile(g, p)).collect()
}

/// `Π_k (1 - E[z_j(ρ_k)])` per node: the probability that nobody visits `j`.
pub fn miss_probabilities(node_count: usize, profiles: &[VisitProfile]) -> Vec<f64> {
    let mut miss = vec![1.0; node_count];
    for p in profiles {
        for (m, z) in miss.iter_mut().zip(&p.visit_prob) {
            *m *= 1.0 - z;
        }
    }
    miss
}

/// Objective value plus the per-node team visit probabilities `E[x_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamValue {
    pub objective: f64,
    pub visit_prob: Vec<f64>,
}

pub fn team_value(priorities: &[f64], profiles: &[VisitProfile]) -> TeamValue {
    let visit_prob: Vec<f64> = miss_probabilities(priorities.len(), profiles)
        .into_iter()
        .map(|m| 1.0 - m)
        .collect();
    let objective = visit_prob.iter().zip(priorities).map(|(x, d)| x * d).sum();
    TeamValue { objective, visit_prob }
}

/// `J = Σ_j d_j (1 - Π_k (1 - E[z_j(ρ_k)]))`.
pub fn team_objective(g: &SurvivalGraph, paths: &[Path]) -> Result<TeamValue> {
    Ok(team_value(g.priorities(), &profiles(g, paths)?))
}

/// `ΔJ(ρ | X) = Σ_j E[z_j(ρ)] d_j Π_{ρ_k ∈ X} (1 - E[z_j(ρ_k)])`.
pub fn discrete_derivative(g: &SurvivalGraph, candidate: &Path, existing: &[Path]) -> Result<f64> {
    let cand = visit_profile(g, candidate)?;
    let prev = profiles(g, existing)?;
    Ok(marginal_gain(g.priorities(), &cand, &prev))
}

pub fn marginal_gain(priorities: &[f64], candidate: &VisitProfile, existing: &[VisitProfile]) -> f64 {
    let miss = miss_probabilities(priorities.len(), existing);
    candidate
        .visit_prob
        .iter()
        .zip(priorities)
        .zip(&miss)
        .map(|((z, d), m)| z * d * m)
        .sum()
}

/// A feasible-or-not team of paths together with its evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamPlan {
    pub paths: Vec<Path>,
    pub profiles: Vec<VisitProfile>,
    pub objective: f64,
    pub visit_prob: Vec<f64>,
}

impl TeamPlan {
    pub fn evaluate(g: &SurvivalGraph, paths: Vec<Path>) -> Result<Self> {
        let profiles = profiles(g, &paths)?;
        let TeamValue { objective, visit_prob } = team_value(g.priorities(), &profiles);
        Ok(TeamPlan { paths, profiles, objective, visit_prob })
    }

    pub fn path_survivals(&self) -> Vec<f64> {
        self.profiles.iter().map(VisitProfile::survival).collect()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Distribution of the number of independent successes with success probabilities
/// `probs` (Poisson-binomial), by the usual O(q²) recurrence.
pub fn poisson_binomial(probs: &[f64]) -> Vec<f64> {
    let mut dist = vec![0.0; probs.len() + 1];
    dist[0] = 1.0;
    for (k, &p) in probs.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            dist[m] = dist[m] * (1.0 - p) + dist[m - 1] * p;
        }
        dist[0] *= 1.0 - p;
    }
    dist
}

/// Per node, `P(exactly m robots visit j)` for `m = 0..=q`.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitCountDistribution {
    pub rows: Vec<Vec<f64>>,
}

impl VisitCountDistribution {
    pub fn exactly(&self, j: NodeId, m: usize) -> f64 {
        self.rows[j.index()].get(m).copied().unwrap_or(0.0)
    }

    /// `P(at least m visits)`.
    pub fn at_least(&self, j: NodeId, m: usize) -> f64 {
        let row = &self.rows[j.index()];
        if m == 0 {
            return 1.0;
        }
        // summing the upper tail directly keeps small probabilities accurate
        row.iter().skip(m).sum()
    }
}

pub fn visit_count_distribution(node_count: usize, profiles: &[VisitProfile]) -> VisitCountDistribution {
    let rows = (0..node_count)
        .map(|j| {
            let probs: Vec<f64> = profiles.iter().map(|p| p.visit_prob[j]).collect();
            poisson_binomial(&probs)
        })
        .collect();
    VisitCountDistribution { rows }
}

/// Per-node rewards `d_j^(m)` for the `m`-th visit, `m = 1..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVisitTable {
    rows: Vec<Vec<f64>>,
    max_visits: usize,
}

impl MultiVisitTable {
    /// Rejects rows of the wrong length, negative entries, and rows that increase in `m`
    /// (the objective is only submodular for non-increasing marginal rewards).
    pub fn new(max_visits: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if max_visits == 0 {
            return Err(TsoError::MultiVisit("M must be at least 1".into()));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != max_visits {
                return Err(TsoError::MultiVisit(format!(
                    "node index {j} has {} entries, expected M = {max_visits}",
                    row.len()
                )));
            }
            if row.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
                return Err(TsoError::MultiVisit(format!("node index {j} has a negative or non-finite reward")));
            }
            if row.windows(2).any(|w| w[1] > w[0]) {
                return Err(TsoError::MultiVisit(format!(
                    "rewards for node index {j} increase with the visit count"
                )));
            }
        }
        Ok(MultiVisitTable { rows, max_visits })
    }

    /// `M = 1` with `d_j^(1) = d_j`.
    pub fn single_visit(priorities: &[f64]) -> Self {
        MultiVisitTable { rows: priorities.iter().map(|&d| vec![d]).collect(), max_visits: 1 }
    }

    pub fn max_visits(&self) -> usize {
        self.max_visits
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, j: NodeId) -> &[f64] {
        &self.rows[j.index()]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Linearized weight of node `j` given its visit-count distribution so far:
    /// `Σ_m d_j^(m) P(exactly m - 1 previous visits)`.
    pub fn next_visit_weight(&self, j: NodeId, counts: &VisitCountDistribution) -> f64 {
        self.row(j).iter().enumerate().map(|(m, d)| d * counts.exactly(j, m)).sum()
    }
}

/// `Σ_j Σ_{m ≤ M} d_j^(m) P(at least m visits to j)`.
pub fn multi_visit_objective(g: &SurvivalGraph, paths: &[Path], table: &MultiVisitTable) -> Result<f64> {
    if table.node_count() != g.node_count() {
        return Err(TsoError::MultiVisit(format!(
            "table covers {} nodes, graph has {}",
            table.node_count(),
            g.node_count()
        )));
    }
    let profiles = profiles(g, paths)?;
    Ok(multi_visit_value(table, &profiles))
}

pub fn multi_visit_value(table: &MultiVisitTable, profiles: &[VisitProfile]) -> f64 {
    let counts = visit_count_distribution(table.node_count(), profiles);
    (0..table.node_count())
        .map(NodeId)
        .map(|j| {
            table
                .row(j)
                .iter()
                .enumerate()
                .map(|(m, d)| d * counts.at_least(j, m + 1))
                .sum::<f64>()
        })
        .sum()
}

/// Rewards `d_{i,j}` attached to existing edges, stored by edge index.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRewards {
    by_edge: Vec<f64>,
}

impl EdgeRewards {
    pub fn new(g: &SurvivalGraph, rewards: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let mut by_edge = vec![0.0; g.edges().len()];
        for &(a, b, d) in rewards {
            let e = g.edge_index(a, b).ok_or_else(|| {
                TsoError::EdgeReward(format!("reward on ({a}, {b}), which is not an edge"))
            })?;
            if !(d >= 0.0) || !d.is_finite() {
                return Err(TsoError::EdgeReward(format!("reward {d} on ({a}, {b}) is negative")));
            }
            by_edge[e] = d;
        }
        Ok(EdgeRewards { by_edge })
    }

    pub fn by_edge(&self) -> &[f64] {
        &self.by_edge
    }
}

/// `Σ_{(i,j)} d_{i,j} (1 - Π_k (1 - E[z_{i,j}(ρ_k)]))`.
pub fn edge_team_objective(g: &SurvivalGraph, paths: &[Path], rewards: &EdgeRewards) -> Result<f64> {
    let profiles = profiles(g, paths)?;
    Ok(edge_team_value(rewards, &profiles))
}

pub fn edge_miss_probabilities(edge_count: usize, profiles: &[VisitProfile]) -> Vec<f64> {
    let mut miss = vec![1.0; edge_count];
    for p in profiles {
        for &(e, z) in &p.edge_visits {
            miss[e] *= 1.0 - z;
        }
    }
    miss
}

pub fn edge_team_value(rewards: &EdgeRewards, profiles: &[VisitProfile]) -> f64 {
    edge_miss_probabilities(rewards.by_edge.len(), profiles)
        .iter()
        .zip(&rewards.by_edge)
        .map(|(m, d)| d * (1.0 - m))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::diamond;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn profile_of_diamond_path() {
        let g = diamond(0.8);
        let p = visit_profile(&g, &g.path_from_labels(&[1, 2, 4]).unwrap()).unwrap();
        assert!(close(p.visit_prob[1], 0.9, 1e-15));
        assert!(close(p.visit_prob[3], 0.81, 1e-15));
        assert_eq!(p.visit_prob[0], 0.0);
        assert_eq!(p.visit_prob[2], 0.0);
        assert!(close(p.survival(), 0.81, 1e-15));
        assert_eq!(p.survival_prefix[0], 1.0);
    }

    #[test]
    fn depot_return_counts_as_visit() {
        let g = SurvivalGraph::builder()
            .nodes(1..=2)
            .undirected_edge(1, 2, 0.9)
            .start(1)
            .terminal(1)
            .threshold(0.5)
            .build()
            .unwrap();
        let p = visit_profile(&g, &g.path_from_labels(&[1, 2, 1]).unwrap()).unwrap();
        assert!(close(p.visit_prob[0], 0.81, 1e-15));
    }

    #[test]
    fn missing_edge_is_an_error() {
        let g = diamond(0.8);
        let err = visit_profile(&g, &g.path_from_labels(&[1, 2, 3]).unwrap());
        assert!(matches!(err, Err(TsoError::MissingEdge { .. })));
    }

    #[test]
    fn two_profiles_at_096_combine_to_09984() {
        let v = poisson_binomial(&[0.96, 0.96]);
        assert!(close(1.0 - v[0], 0.9984, 1e-12));
    }

    #[test]
    fn empty_plan_is_zero() {
        let g = diamond(0.8);
        assert_eq!(team_objective(&g, &[]).unwrap().objective, 0.0);
        let t = MultiVisitTable::new(2, vec![vec![1.0, 0.5]; 4]).unwrap();
        assert_eq!(multi_visit_objective(&g, &[], &t).unwrap(), 0.0);
    }

    #[test]
    fn diamond_team_values() {
        let g = diamond(0.8);
        let p = g.path_from_labels(&[1, 2, 4]).unwrap();
        let direct = g.path_from_labels(&[1, 4]).unwrap();
        let j = team_objective(&g, &[p.clone(), p.clone()]).unwrap().objective;
        assert!(close(j, 1.9539, 1e-12));
        assert!(close(discrete_derivative(&g, &p, &[]).unwrap(), 1.71, 1e-12));
        assert!(close(discrete_derivative(&g, &p, &[p.clone()]).unwrap(), 0.2439, 1e-12));
        assert!(close(discrete_derivative(&g, &direct, &[p.clone()]).unwrap(), 0.19, 1e-12));
    }

    #[test]
    fn poisson_binomial_small_cases() {
        assert_eq!(poisson_binomial(&[]), vec![1.0]);
        let d = poisson_binomial(&[0.9, 0.81]);
        assert!(close(d[0], 0.019, 1e-15));
        assert!(close(d[1], 0.252, 1e-15));
        assert!(close(d[2], 0.729, 1e-15));
    }

    #[test]
    fn multi_visit_two_visits() {
        let g = SurvivalGraph::builder()
            .nodes(1..=3)
            .edge(1, 2, 0.9)
            .edge(2, 3, 0.9)
            .start(1)
            .terminal(3)
            .threshold(0.5)
            .build()
            .unwrap();
        let p = g.path_from_labels(&[1, 2, 3]).unwrap();
        // only node 3 carries a reward; it is reached with probability 0.81
        let t = MultiVisitTable::new(2, vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.5]]).unwrap();
        let v = multi_visit_objective(&g, &[p.clone(), p], &t).unwrap();
        assert!(close(v, 1.29195, 1e-12));
    }

    #[test]
    fn multi_visit_rejects_increasing_rewards() {
        assert!(matches!(MultiVisitTable::new(2, vec![vec![0.5, 1.0]]), Err(TsoError::MultiVisit(_))));
        assert!(MultiVisitTable::new(2, vec![vec![1.0]]).is_err());
        assert!(MultiVisitTable::new(0, vec![]).is_err());
    }

    #[test]
    fn m1_matches_team_objective() {
        let g = diamond(0.8);
        let p = g.path_from_labels(&[1, 2, 4]).unwrap();
        let q = g.path_from_labels(&[1, 4]).unwrap();
        let t = MultiVisitTable::single_visit(g.priorities());
        let a = multi_visit_objective(&g, &[p.clone(), q.clone()], &t).unwrap();
        let b = team_objective(&g, &[p, q]).unwrap().objective;
        assert!(close(a, b, 1e-12));
    }

    #[test]
    fn edge_objective_on_diamond() {
        let g = diamond(0.8);
        let all: Vec<_> = g.edges().iter().map(|e| (e.from, e.to, 1.0)).collect();
        let r = EdgeRewards::new(&g, &all).unwrap();
        let p = g.path_from_labels(&[1, 2, 4]).unwrap();
        assert!(close(edge_team_objective(&g, &[p.clone()], &r).unwrap(), 1.71, 1e-12));

        let only12 = EdgeRewards::new(&g, &[(NodeId(0), NodeId(1), 1.0)]).unwrap();
        let two = edge_team_objective(&g, &[p.clone(), p.clone()], &only12).unwrap();
        assert!(close(two, 0.99, 1e-12));

        let only13 = EdgeRewards::new(&g, &[(NodeId(0), NodeId(2), 1.0)]).unwrap();
        assert_eq!(edge_team_objective(&g, &[p], &only13).unwrap(), 0.0);
    }

    #[test]
    fn edge_reward_on_non_edge_is_rejected() {
        let g = diamond(0.8);
        assert!(matches!(
            EdgeRewards::new(&g, &[(NodeId(1), NodeId(0), 1.0)]),
            Err(TsoError::EdgeReward(_))
        ));
    }
}
