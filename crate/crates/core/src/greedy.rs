//! Greedy team construction and its upper-bound certificate.
//!
//! Path `k + 1` is an orienteering solution for node weights
//! `ν_{k+1}(j) = ζ_j · d_j · Π_{i ≤ k} (1 - E[z_j(ρ_i)])`, maintained incrementally: after
//! choosing `ρ_k`, every node at step `n ≥ 1` of `ρ_k` has its weight scaled by
//! `1 - E[a_n(ρ_k)]`. The edge and multi-visit variants rebuild the weights from the
//! chosen profiles at each step instead.

use crate::error::{Result, TsoError};
use crate::generate::derive_seed;
use crate::graph::{relaxed_reachable, NodeId, Path, SurvivalGraph, BUDGET_TOL};
use crate::objective::{
    edge_miss_probabilities, edge_team_value, marginal_gain, multi_visit_value, team_value, visit_count_distribution,
    visit_profile, EdgeRewards, MultiVisitTable, TeamPlan, VisitProfile,
};
use crate::orienteering::{solve_exact, solve_heuristic, HeuristicOptions, OracleResult, OrienteeringProblem, Rewards};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleKind {
    Exact,
    Heuristic(HeuristicOptions),
}

/// Which objective the team is built for.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    Node,
    Edge(EdgeRewards),
    MultiVisit(MultiVisitTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyConfig {
    pub team_size: usize,
    /// Larger team size `L ≥ K` used only for the oversized-team bound.
    pub oversize: Option<usize>,
    pub oracle: OracleKind,
    pub variant: Variant,
    pub seed: u64,
}

impl GreedyConfig {
    /// Node objective, exact oracle, no oversize run.
    pub fn new(team_size: usize) -> Self {
        GreedyConfig { team_size, oversize: None, oracle: OracleKind::Exact, variant: Variant::Node, seed: 0 }
    }

    pub fn with_oversize(mut self, l: usize) -> Self {
        self.oversize = Some(l);
        self
    }

    pub fn with_oracle(mut self, oracle: OracleKind) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of greedy iterations needed: `max(K, L)`.
    pub fn steps(&self) -> usize {
        self.oversize.map_or(self.team_size, |l| l.max(self.team_size))
    }

    pub fn validate(&self, g: &SurvivalGraph) -> Result<()> {
        if self.team_size == 0 {
            return Err(TsoError::Config("team size must be at least 1".into()));
        }
        if let Some(l) = self.oversize {
            if l < self.team_size {
                return Err(TsoError::Config(format!("oversize {l} is smaller than the team size {}", self.team_size)));
            }
        }
        match &self.variant {
            Variant::Node => {}
            Variant::Edge(r) if r.by_edge().len() != g.edges().len() => {
                return Err(TsoError::EdgeReward("rewards were built for a different graph".into()));
            }
            Variant::MultiVisit(t) if t.node_count() != g.node_count() => {
                return Err(TsoError::MultiVisit(format!(
                    "table covers {} nodes, graph has {}",
                    t.node_count(),
                    g.node_count()
                )));
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    pub path: Path,
    /// Increase of the variant objective caused by this path.
    pub gain: f64,
    /// Linearized reward the oracle collected.
    pub oracle_reward: f64,
    /// Variant objective of the first `k + 1` paths.
    pub objective: f64,
    pub nodes_expanded: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyRun {
    /// The first `K` paths, evaluated under the node objective.
    pub plan: TeamPlan,
    /// Per-path marginal gains of the first `K` paths.
    pub gains: Vec<f64>,
    /// Variant objective of the first `K` paths (equals `plan.objective` for [`Variant::Node`]).
    pub variant_objective: f64,
    /// All `max(K, L)` iterations.
    pub steps: Vec<GreedyStep>,
    /// True when every path came from the exact oracle.
    pub exact: bool,
}

impl GreedyRun {
    /// Variant objective of the first `n` chosen paths.
    pub fn objective_after(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.steps[n - 1].objective
        }
    }
}

fn variant_value(g: &SurvivalGraph, variant: &Variant, profiles: &[VisitProfile]) -> f64 {
    match variant {
        Variant::Node => team_value(g.priorities(), profiles).objective,
        Variant::Edge(r) => edge_team_value(r, profiles),
        Variant::MultiVisit(t) => multi_visit_value(t, profiles),
    }
}

/// Builds `max(K, L)` paths greedily; the first `K` form the plan.
///
/// Because each step only depends on earlier ones, the first `K` paths of an
/// oversized run are exactly the `K`-robot plan.
pub fn greedy_survivors(g: &SurvivalGraph, cfg: &GreedyConfig) -> Result<GreedyRun> {
    cfg.validate(g)?;
    let lg = g.log_transform();
    let cheapest = lg.shortest_route_cost();
    if cheapest > lg.budget() + BUDGET_TOL {
        return Err(TsoError::Infeasible(format!(
            "no path from {} to {} survives with probability {}: best is {:.9}",
            g.label(g.start()),
            g.label(g.terminal()),
            g.p_s(),
            (-cheapest).exp()
        )));
    }
    let n = g.node_count();
    let zeta = lg.max_visit_probabilities();
    let mut weights: Vec<f64> = zeta.iter().zip(g.priorities()).map(|(z, d)| z * d).collect();
    let mut profiles: Vec<VisitProfile> = Vec::with_capacity(cfg.steps());
    let mut steps = Vec::with_capacity(cfg.steps());
    let mut objective = 0.0;

    for k in 0..cfg.steps() {
        let rewards = match &cfg.variant {
            Variant::Node => Rewards::Nodes(weights.clone()),
            Variant::MultiVisit(t) => {
                let counts = visit_count_distribution(n, &profiles);
                Rewards::Nodes((0..n).map(|j| zeta[j] * t.next_visit_weight(NodeId(j), &counts)).collect())
            }
            Variant::Edge(r) => {
                let miss = edge_miss_probabilities(g.edges().len(), &profiles);
                Rewards::Arcs(
                    g.edges()
                        .iter()
                        .enumerate()
                        .map(|(e, edge)| zeta[edge.from.index()] * edge.survival * r.by_edge()[e] * miss[e])
                        .collect(),
                )
            }
        };
        let problem = OrienteeringProblem::new(&lg, rewards)?;
        let OracleResult { path, reward, nodes_expanded, .. } = match cfg.oracle {
            OracleKind::Exact => solve_exact(&problem)?,
            OracleKind::Heuristic(opts) => solve_heuristic(&problem, derive_seed(cfg.seed, k as u64), opts)?,
        };
        let profile = visit_profile(g, &path)?;

        let gain = match &cfg.variant {
            Variant::Node => marginal_gain(g.priorities(), &profile, &profiles),
            _ => {
                profiles.push(profile.clone());
                let after = variant_value(g, &cfg.variant, &profiles);
                profiles.pop();
                after - objective
            }
        };
        if matches!(cfg.variant, Variant::Node) {
            for (step, j) in path.nodes().iter().enumerate().skip(1) {
                weights[j.index()] *= 1.0 - profile.survival_prefix[step];
            }
        }
        profiles.push(profile);
        objective = variant_value(g, &cfg.variant, &profiles);
        steps.push(GreedyStep { path, gain, oracle_reward: reward, objective, nodes_expanded });
    }

    let k = cfg.team_size;
    let plan = TeamPlan::evaluate(g, steps[..k].iter().map(|s| s.path.clone()).collect())?;
    Ok(GreedyRun {
        gains: steps[..k].iter().map(|s| s.gain).collect(),
        variant_objective: steps[k - 1].objective,
        plan,
        steps,
        exact: cfg.oracle == OracleKind::Exact,
    })
}

/// Upper bounds on the optimal `K`-robot objective.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    /// `Σ_j d_j (1 - (1 - ζ_j)^K)` over nodes some feasible path may visit.
    pub u1: f64,
    /// `J(greedy_K) / (1 - e^{-p_s/λ})`; needs a known oracle factor.
    pub u2: Option<f64>,
    /// Best oversized-team bound `J(greedy_L') / (1 - e^{-p_s L' / (λK)})` over `K < L' ≤ L`.
    pub u3: Option<f64>,
    pub upper: f64,
    /// `1 - e^{-p_s/λ}`.
    pub factor: Option<f64>,
    /// `1 - e^{-p_s L/(λK)}` for the requested `L`.
    pub oversize_factor: Option<f64>,
    /// Oracle approximation ratio; 1 for the exact oracle, unknown for the heuristic.
    pub lambda: Option<f64>,
    pub certified: bool,
}

/// Closed-form guarantee `1 - e^{-p_s L / (λ K)}`.
pub fn guarantee_factor(p_s: f64, lambda: f64, l: usize, k: usize) -> f64 {
    -(-p_s * l as f64 / (lambda * k as f64)).exp_m1()
}

/// Combines the reachable-weight, constant-factor and oversized-team bounds.
///
/// Only meaningful for the node objective. With a heuristic oracle there is no known
/// factor, so only the reachable-weight bound is reported and `certified` is false.
pub fn compute_bounds(g: &SurvivalGraph, cfg: &GreedyConfig, run: &GreedyRun) -> Result<BoundCertificate> {
    if !matches!(cfg.variant, Variant::Node) {
        return Err(TsoError::Config("bounds are only defined for the node objective".into()));
    }
    let k = cfg.team_size;
    if run.steps.len() < cfg.steps() {
        return Err(TsoError::Config(format!(
            "run has {} paths, the configuration needs {}",
            run.steps.len(),
            cfg.steps()
        )));
    }
    let lg = g.log_transform();
    let zeta = lg.max_visit_probabilities();
    let u1 = relaxed_reachable(&lg)
        .iter()
        .enumerate()
        .filter(|(_, ok)| **ok)
        .map(|(j, _)| g.priorities()[j] * (1.0 - (1.0 - zeta[j]).powi(k as i32)))
        .sum::<f64>();

    let p_s = g.p_s();
    let (lambda, factor, u2, u3, oversize_factor) = if run.exact {
        let factor = guarantee_factor(p_s, 1.0, 1, 1);
        let u2 = run.objective_after(k) / factor;
        let l = cfg.oversize.unwrap_or(k);
        let u3 = (k + 1..=l)
            .map(|lp| run.objective_after(lp) / guarantee_factor(p_s, 1.0, lp, k))
            .min_by(f64::total_cmp);
        (Some(1.0), Some(factor), Some(u2), u3, cfg.oversize.map(|l| guarantee_factor(p_s, 1.0, l, k)))
    } else {
        (None, None, None, None, None)
    };
    let upper = [Some(u1), u2, u3].into_iter().flatten().fold(f64::INFINITY, f64::min);
    Ok(BoundCertificate { u1, u2, u3, upper, factor, oversize_factor, lambda, certified: run.exact })
}
