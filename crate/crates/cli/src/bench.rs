//! Benchmark suites: greedy value against the certified upper bound.

use std::time::Instant;

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use tso_core::generate::{derive_seed, hex, random_complete};
use tso_core::graph::{feasibility_check, SurvivalGraph};
use tso_core::greedy::{compute_bounds, greedy_survivors, GreedyConfig, OracleKind};
use tso_core::orienteering::HeuristicOptions;

use crate::{sig9, OracleArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Random complete graphs over a grid of thresholds.
    Ratio,
    /// The 19-node hex preset.
    Hex,
}

pub const RATIO_NODES: usize = 20;
pub const RATIO_THRESHOLDS: [f64; 7] = [0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95];
pub const RATIO_WEIGHTS: (f64, f64) = (0.3, 1.0);
pub const RATIO_MAX_TEAM: usize = 5;
pub const HEX_THRESHOLD: f64 = 0.7;
pub const HEX_MAX_TEAM: usize = 6;
/// Oversized teams are chosen so that `p_s L / K` reaches this value.
pub const OVERSIZE_EXPONENT: f64 = 6.0;
const MAX_DRAWS: u64 = 1000;

pub const CSV_HEADER: [&str; 9] = ["instance", "V", "K", "p_s", "oracle", "J", "U", "ratio", "ms"];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub nodes: usize,
    pub team: usize,
    pub p_s: f64,
    pub oracle: &'static str,
    pub objective: f64,
    pub upper: f64,
    pub ratio: f64,
    /// Wall time of the greedy run shared by all team sizes of the cell.
    pub ms: f64,
}

/// Smallest `L` with `p_s L / K ≥ 6`.
pub fn oversize_for(team: usize, p_s: f64) -> usize {
    ((OVERSIZE_EXPONENT * team as f64 / p_s) - 1e-9).ceil() as usize
}

/// Random complete graph for cell `cell`; redrawn until a feasible route exists.
pub fn ratio_instance(master: u64, cell: u64, p_s: f64) -> Result<(SurvivalGraph, u64)> {
    let cell_seed = derive_seed(master, cell);
    for draw in 0..MAX_DRAWS {
        let g = random_complete(RATIO_NODES, RATIO_WEIGHTS.0, RATIO_WEIGHTS.1, p_s, derive_seed(cell_seed, draw));
        if feasibility_check(&g).nonempty {
            return Ok((g, draw));
        }
    }
    Err(anyhow!("no feasible instance after {MAX_DRAWS} draws at p_s = {p_s}"))
}

fn oracle_kind(oracle: OracleArg) -> OracleKind {
    match oracle {
        OracleArg::Exact => OracleKind::Exact,
        OracleArg::Heuristic => OracleKind::Heuristic(HeuristicOptions::default()),
    }
}

/// One greedy run of `max_team` robots plus its oversized tail, reported for every
/// team size `1..=max_team`.
fn cell(
    name: String,
    g: &SurvivalGraph,
    max_team: usize,
    oracle: OracleArg,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    let l = oversize_for(max_team, g.p_s());
    let cfg = GreedyConfig::new(max_team).with_oversize(l).with_oracle(oracle_kind(oracle)).with_seed(seed);
    let clock = Instant::now();
    let run = greedy_survivors(g, &cfg)?;
    let ms = clock.elapsed().as_secs_f64() * 1e3;
    (1..=max_team)
        .map(|k| {
            let sub = GreedyConfig { team_size: k, ..cfg.clone() };
            let bounds = compute_bounds(g, &sub, &run)?;
            let objective = run.objective_after(k);
            Ok(BenchRecord {
                instance: name.clone(),
                nodes: g.node_count(),
                team: k,
                p_s: g.p_s(),
                oracle: oracle.name(),
                objective,
                upper: bounds.upper,
                ratio: objective / bounds.upper,
                ms,
            })
        })
        .collect()
}

/// Runs a suite. Cells run in parallel; the record order and every value except `ms`
/// depend only on the arguments.
pub fn run_bench(suite: Suite, oracle: OracleArg, seeds: usize, master: u64) -> Result<Vec<BenchRecord>> {
    match suite {
        Suite::Hex => cell("hex".into(), &hex(HEX_THRESHOLD), HEX_MAX_TEAM, oracle, master),
        Suite::Ratio => {
            let cells: Vec<(usize, usize)> =
                (0..RATIO_THRESHOLDS.len()).flat_map(|p| (0..seeds).map(move |s| (p, s))).collect();
            let per_cell = cells
                .par_iter()
                .enumerate()
                .map(|(idx, &(p, s))| {
                    let p_s = RATIO_THRESHOLDS[p];
                    let (g, draw) = ratio_instance(master, (p * 1000 + s) as u64, p_s)?;
                    let name = format!("complete-p{p_s}-s{s}-d{draw}");
                    cell(name, &g, RATIO_MAX_TEAM, oracle, derive_seed(master, idx as u64))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(per_cell.into_iter().flatten().collect())
        }
    }
}

pub fn to_csv(records: &[BenchRecord], omit_timing: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        let ms = if omit_timing { "0".to_string() } else { format!("{:.3}", r.ms) };
        w.write_record([
            r.instance.clone(),
            r.nodes.to_string(),
            r.team.to_string(),
            r.p_s.to_string(),
            r.oracle.to_string(),
            sig9(r.objective),
            sig9(r.upper),
            sig9(r.ratio),
            ms,
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oversize_reaches_exponent() {
        assert_eq!(oversize_for(5, 0.5), 60);
        assert_eq!(oversize_for(6, 0.7), 52);
        assert_eq!(oversize_for(1, 0.75), 8);
        for k in 1..=6 {
            for p in RATIO_THRESHOLDS {
                let l = oversize_for(k, p);
                assert!(p * l as f64 / k as f64 >= OVERSIZE_EXPONENT - 1e-9);
                assert!(p * (l - 1) as f64 / (k as f64) < OVERSIZE_EXPONENT);
            }
        }
    }

    #[test]
    fn header_is_fixed() {
        let text = to_csv(&[], true).unwrap();
        assert_eq!(text, "instance,V,K,p_s,oracle,J,U,ratio,ms\n");
    }
}
