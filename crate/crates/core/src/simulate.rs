//! Monte-Carlo evaluation of a team plan by sampling edge survivals.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, TsoError};
use crate::graph::{Path, SurvivalGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    /// Sample mean of the weighted number of distinct nodes visited.
    pub mean: f64,
    pub std_error: f64,
    /// Fraction of trials in which each robot completed its path.
    pub survival_freq: Vec<f64>,
}

impl SimulationReport {
    /// Standard error of a survival frequency, `sqrt(p (1 - p) / n)`.
    pub fn survival_std_error(&self, robot: usize) -> f64 {
        let p = self.survival_freq[robot];
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

struct Trial {
    value: f64,
    survived: Vec<bool>,
}

/// Samples one independent Bernoulli per edge traversal per robot per trial.
///
/// Trial `t` draws from ChaCha8 stream `t` of `seed`, so the report does not depend on
/// how the trials are scheduled across threads.
pub fn simulate_team(g: &SurvivalGraph, paths: &[Path], trials: u64, seed: u64) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(TsoError::Config("trials must be at least 1".into()));
    }
    let steps: Vec<Vec<(usize, f64)>> = paths
        .iter()
        .map(|p| {
            p.check(g)?;
            p.steps()
                .map(|(a, b)| {
                    g.survival(a, b)
                        .map(|w| (b.index(), w))
                        .ok_or(TsoError::MissingEdge { from: a, to: b })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let priorities = g.priorities();
    let n = g.node_count();

    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![false; n],
            |visited, t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t);
                visited.iter_mut().for_each(|v| *v = false);
                let survived = steps
                    .iter()
                    .map(|route| {
                        for &(node, w) in route {
                            if !rng.gen_bool(w) {
                                return false;
                            }
                            visited[node] = true;
                        }
                        true
                    })
                    .collect();
                let value = visited.iter().zip(priorities).filter(|(v, _)| **v).map(|(_, d)| d).sum();
                Trial { value, survived }
            },
        )
        .collect();

    let count = trials as f64;
    let mean = outcomes.iter().map(|o| o.value).sum::<f64>() / count;
    let var = if trials > 1 {
        outcomes.iter().map(|o| (o.value - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    let survival_freq = (0..paths.len())
        .map(|k| outcomes.iter().filter(|o| o.survived[k]).count() as f64 / count)
        .collect();
    Ok(SimulationReport { trials, mean, std_error: (var / count).sqrt(), survival_freq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::diamond;
    use crate::objective::team_objective;

    #[test]
    fn unit_survival_is_exact() {
        let g = SurvivalGraph::builder()
            .nodes(1..=3)
            .edge(1, 2, 1.0)
            .edge(2, 3, 1.0)
            .start(1)
            .terminal(3)
            .threshold(1.0)
            .build()
            .unwrap();
        let p = g.path_from_labels(&[1, 2, 3]).unwrap();
        let r = simulate_team(&g, &[p.clone()], 500, 3).unwrap();
        assert_eq!(r.mean, team_objective(&g, &[p]).unwrap().objective);
        assert_eq!(r.std_error, 0.0);
        assert_eq!(r.survival_freq, vec![1.0]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = diamond(0.8);
        let p = g.path_from_labels(&[1, 2, 4]).unwrap();
        let a = simulate_team(&g, &[p.clone(), p.clone()], 1, 42).unwrap();
        let b = simulate_team(&g, &[p.clone(), p], 1, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_trials_rejected() {
        let g = diamond(0.8);
        assert!(simulate_team(&g, &[], 0, 1).is_err());
    }
}
