//! Exhaustive ground truth for small instances.
//!
//! Every feasible path is enumerated, then every multiset of `K` catalog paths is scored.
//! The objective does not depend on path order, so multisets (indices in non-decreasing
//! order) cover every team exactly once.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Result, TsoError};
use crate::graph::{LogGraph, NodeId, Path, SurvivalGraph, BRUTE_FORCE_MAX_NODES, BUDGET_TOL};
use crate::objective::{visit_profile, TeamPlan, VisitProfile};

/// Upper limit on scored multisets.
pub const MAX_TEAMS: u128 = 10_000_000;
/// Upper limit on catalog size.
pub const MAX_CATALOG: usize = 1_000_000;

/// Every feasible path, sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCatalog {
    pub paths: Vec<Path>,
    pub profiles: Vec<VisitProfile>,
}

impl PathCatalog {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

pub fn enumerate_feasible_paths(g: &SurvivalGraph) -> Result<PathCatalog> {
    enumerate_feasible_paths_with(g, BRUTE_FORCE_MAX_NODES)
}

/// As [`enumerate_feasible_paths`] with a custom node-count guard.
pub fn enumerate_feasible_paths_with(g: &SurvivalGraph, max_nodes: usize) -> Result<PathCatalog> {
    if g.node_count() > max_nodes {
        return Err(TsoError::Guard(format!(
            "path enumeration supports at most {max_nodes} nodes, got {}",
            g.node_count()
        )));
    }
    let lg = g.log_transform();
    let mut e = Enumerator {
        lg: &lg,
        limit: lg.budget() + BUDGET_TOL,
        to_terminal: lg.distances_to(lg.terminal()),
        stack: vec![lg.start()],
        on_path: vec![false; g.node_count()],
        found: Vec::new(),
    };
    e.on_path[lg.start().index()] = true;
    e.walk(0.0)?;
    let mut paths = e.found;
    paths.sort();
    let profiles = paths.iter().map(|p| visit_profile(g, p)).collect::<Result<_>>()?;
    Ok(PathCatalog { paths, profiles })
}

struct Enumerator<'a> {
    lg: &'a LogGraph,
    limit: f64,
    to_terminal: Vec<f64>,
    stack: Vec<NodeId>,
    on_path: Vec<bool>,
    found: Vec<Path>,
}

impl Enumerator<'_> {
    fn walk(&mut self, cost: f64) -> Result<()> {
        let u = *self.stack.last().unwrap();
        for a in self.lg.out(u) {
            let c = cost + a.cost;
            if c + self.to_terminal[a.to.index()] > self.limit {
                continue;
            }
            if a.to == self.lg.terminal() {
                let mut nodes = self.stack.clone();
                nodes.push(a.to);
                self.found.push(Path::new(nodes));
                if self.found.len() > MAX_CATALOG {
                    return Err(TsoError::Guard(format!("more than {MAX_CATALOG} feasible paths")));
                }
                continue;
            }
            if self.on_path[a.to.index()] {
                continue;
            }
            self.on_path[a.to.index()] = true;
            self.stack.push(a.to);
            let r = self.walk(c);
            self.stack.pop();
            self.on_path[a.to.index()] = false;
            r?;
        }
        Ok(())
    }
}

/// Number of size-`k` multisets over `n` items, `C(n + k - 1, k)`, saturating.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c.saturating_mul(n as u128 + i) / (i + 1);
    }
    c
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactTeam {
    pub plan: TeamPlan,
    /// Catalog indices of the chosen paths, non-decreasing.
    pub indices: Vec<usize>,
    pub catalog_size: usize,
    pub teams_scored: u128,
}

/// Optimal `K`-robot team by exhaustive search over catalog multisets.
///
/// Ties go to the lexicographically smallest index sequence, i.e. the smallest sequence
/// of sorted paths.
pub fn solve_exact_tso(g: &SurvivalGraph, k: usize) -> Result<ExactTeam> {
    let catalog = enumerate_feasible_paths(g)?;
    solve_exact_tso_with(g, &catalog, k)
}

pub fn solve_exact_tso_with(g: &SurvivalGraph, catalog: &PathCatalog, k: usize) -> Result<ExactTeam> {
    if k == 0 {
        return Err(TsoError::Config("team size must be at least 1".into()));
    }
    if catalog.is_empty() {
        return Err(TsoError::Infeasible("no feasible path exists".into()));
    }
    let teams = multiset_count(catalog.len(), k);
    if teams > MAX_TEAMS {
        return Err(TsoError::Guard(format!(
            "{teams} teams of {k} over {} paths exceeds the limit of {MAX_TEAMS}",
            catalog.len()
        )));
    }
    let n = g.node_count();
    let d = g.priorities();
    let best = (0..catalog.len())
        .into_par_iter()
        .map(|first| {
            let mut s = TeamSearch {
                catalog,
                d,
                k,
                miss: vec![vec![1.0; n]; k + 1],
                chosen: Vec::with_capacity(k),
                best: None,
            };
            s.descend(first);
            s.best.expect("every branch scores at least one team")
        })
        .reduce_with(|a, b| if cmp_team(&a, &b) == Ordering::Greater { b } else { a })
        .expect("catalog is non-empty");
    let (_, indices) = best;
    let plan = TeamPlan::evaluate(g, indices.iter().map(|&i| catalog.paths[i].clone()).collect())?;
    Ok(ExactTeam { plan, indices, catalog_size: catalog.len(), teams_scored: teams })
}

type Scored = (f64, Vec<usize>);

/// `Less` means `a` is preferred: larger objective, then smaller indices.
fn cmp_team(a: &Scored, b: &Scored) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1))
}

struct TeamSearch<'a> {
    catalog: &'a PathCatalog,
    d: &'a [f64],
    k: usize,
    /// `miss[depth]` is the per-node miss probability of the first `depth` chosen paths.
    miss: Vec<Vec<f64>>,
    chosen: Vec<usize>,
    best: Option<Scored>,
}

impl TeamSearch<'_> {
    fn descend(&mut self, idx: usize) {
        let depth = self.chosen.len();
        let (head, tail) = self.miss.split_at_mut(depth + 1);
        let (prev, next) = (&head[depth], &mut tail[0]);
        for ((m, p), z) in next.iter_mut().zip(prev).zip(&self.catalog.profiles[idx].visit_prob) {
            *m = p * (1.0 - z);
        }
        self.chosen.push(idx);
        if self.chosen.len() == self.k {
            let value: f64 = self.miss[self.k].iter().zip(self.d).map(|(m, d)| d * (1.0 - m)).sum();
            let cand = (value, self.chosen.clone());
            if self.best.as_ref().is_none_or(|b| cmp_team(&cand, b) == Ordering::Less) {
                self.best = Some(cand);
            }
        } else {
            for next in idx..self.catalog.len() {
                self.descend(next);
            }
        }
        self.chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::diamond;

    #[test]
    fn diamond_catalog() {
        let g = diamond(0.8);
        let c = enumerate_feasible_paths(&g).unwrap();
        let labels: Vec<Vec<i64>> = c.paths.iter().map(|p| g.path_labels(p)).collect();
        assert_eq!(labels, vec![vec![1, 2, 4], vec![1, 4]]);
    }

    #[test]
    fn zero_budget_keeps_unit_paths() {
        let g = diamond(1.0);
        let c = enumerate_feasible_paths(&g).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(g.path_labels(&c.paths[0]), vec![1, 4]);
    }

    #[test]
    fn diamond_pair() {
        let g = diamond(0.8);
        let t = solve_exact_tso(&g, 2).unwrap();
        assert_eq!(t.indices, vec![0, 0]);
        assert_eq!(t.teams_scored, 3);
        assert!((t.plan.objective - 1.9539).abs() < 1e-12);
        let one = solve_exact_tso(&g, 1).unwrap();
        assert!((one.plan.objective - 1.71).abs() < 1e-12);
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(2, 2), 3);
        assert_eq!(multiset_count(10, 3), 220);
        assert_eq!(multiset_count(5, 1), 5);
        assert_eq!(multiset_count(0, 0), 1);
    }

    #[test]
    fn guards_are_errors() {
        let g = crate::generate::random_complete(13, 0.9, 1.0, 0.5, 1);
        assert!(matches!(enumerate_feasible_paths(&g), Err(TsoError::Guard(_))));
        let g = crate::generate::random_complete(7, 0.95, 1.0, 0.5, 1);
        let c = enumerate_feasible_paths(&g).unwrap();
        assert!(c.len() > 300);
        assert!(matches!(solve_exact_tso_with(&g, &c, 6), Err(TsoError::Guard(_))));
        let g = SurvivalGraph::builder()
            .nodes(0..2)
            .edge(0, 1, 0.5)
            .start(0)
            .terminal(1)
            .threshold(0.9)
            .build()
            .unwrap();
        assert!(matches!(solve_exact_tso(&g, 1), Err(TsoError::Infeasible(_))));
    }
}
