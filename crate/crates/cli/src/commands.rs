use std::fmt::Write as _;
use std::fs;
use std::path::Path as FsPath;

use anyhow::{bail, Context, Result};
use tso_core::exact_tso::solve_exact_tso;
use tso_core::generate::{hex, random_complete, random_sparse};
use tso_core::graph::{brute_force_feasibility, feasibility_check, SurvivalGraph};
use tso_core::greedy::{compute_bounds, greedy_survivors, GreedyConfig, OracleKind, Variant};
use tso_core::io::{BoundsEntry, Instance, PlanFile};
use tso_core::orienteering::HeuristicOptions;
use tso_core::simulate::simulate_team;
use tso_core::TsoError;

use crate::bench::run_bench;
use crate::{
    sig9, BenchArgs, Cli, Command, ExactArgs, FeasibleArgs, GenArgs, OracleArg, Preset, SimulateArgs, SolveArgs,
    VariantArg,
};

/// Text a command produced. Anything sent to `--out` has already been written.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

/// Runs `cli` on a pool of `threads` workers (0 picks the default).
pub fn run(cli: &Cli, threads: usize) -> Result<Output> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Simulate(a) => simulate(a),
        Command::Exact(a) => exact(a),
        Command::Feasible(a) => feasible(a),
    })
}

/// 2 for an empty feasible set, 3 for a size guard, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<TsoError>() {
        Some(TsoError::Infeasible(_)) => 2,
        Some(TsoError::Guard(_)) => 3,
        _ => 1,
    }
}

fn emit(text: String, out: Option<&FsPath>, note: String) -> Result<Output> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Output { stdout: String::new(), stderr: note })
        }
        None => Ok(Output { stdout: text, stderr: note }),
    }
}

fn load(path: &FsPath) -> Result<Instance> {
    Instance::read(path).with_context(|| format!("reading instance {}", path.display()))
}

fn gen(a: &GenArgs) -> Result<Output> {
    let graph = match a.preset {
        Some(Preset::Hex) => {
            check_threshold(a.p_s)?;
            hex(a.p_s)
        }
        None => {
            if !(a.weight_min > 0.0 && a.weight_min <= a.weight_max && a.weight_max <= 1.0) {
                return Err(TsoError::Config(format!(
                    "weight range [{}, {}] must satisfy 0 < min <= max <= 1",
                    a.weight_min, a.weight_max
                ))
                .into());
            }
            if a.nodes < 2 {
                return Err(TsoError::Config("a random instance needs at least 2 nodes".into()).into());
            }
            check_threshold(a.p_s)?;
            match a.density {
                None if !a.depot => random_complete(a.nodes, a.weight_min, a.weight_max, a.p_s, a.seed),
                density => {
                    let d = density.unwrap_or(1.0);
                    if !(0.0..=1.0).contains(&d) {
                        return Err(TsoError::Config(format!("density {d} is outside [0, 1]")).into());
                    }
                    random_sparse(a.nodes, d, a.weight_min, a.weight_max, a.p_s, a.depot, a.seed)
                }
            }
        }
    };
    let inst = Instance::new(graph, a.team);
    emit(inst.to_json(), a.out.as_deref(), String::new())
}

fn check_threshold(p_s: f64) -> Result<()> {
    if !(p_s > 0.0 && p_s <= 1.0) {
        return Err(TsoError::Config(format!("p_s = {p_s} is outside (0, 1]")).into());
    }
    Ok(())
}

/// Stops early with exit code 2 when no route meets the threshold.
fn require_feasible(g: &SurvivalGraph) -> Result<()> {
    if !feasibility_check(g).nonempty {
        return Err(TsoError::Infeasible(format!(
            "feasibility check failed: no path from {} to {} survives with probability at least {}",
            g.label(g.start()),
            g.label(g.terminal()),
            g.p_s()
        ))
        .into());
    }
    Ok(())
}

fn greedy_config(a: &SolveArgs, inst: &Instance) -> Result<GreedyConfig> {
    let variant = match a.variant {
        VariantArg::Node => Variant::Node,
        VariantArg::Edge => match &inst.edge_rewards {
            Some(r) => Variant::Edge(r.clone()),
            None => bail!("the edge variant needs `edge_rewards` in the instance"),
        },
        VariantArg::MultiVisit => match &inst.multi_visit {
            Some(t) => Variant::MultiVisit(t.clone()),
            None => bail!("the multi-visit variant needs `multi_visit` in the instance"),
        },
    };
    let oracle = match a.oracle {
        OracleArg::Exact => OracleKind::Exact,
        OracleArg::Heuristic => OracleKind::Heuristic(HeuristicOptions { restarts: a.restarts, ..Default::default() }),
    };
    let mut cfg = GreedyConfig::new(a.team.unwrap_or(inst.team_size))
        .with_oracle(oracle)
        .with_variant(variant)
        .with_seed(a.seed);
    cfg.oversize = a.oversize;
    Ok(cfg)
}

fn solve(a: &SolveArgs) -> Result<Output> {
    let inst = load(&a.instance)?;
    let g = &inst.graph;
    require_feasible(g)?;
    let cfg = greedy_config(a, &inst)?;
    let run = greedy_survivors(g, &cfg)?;
    let mut plan = PlanFile::from_plan(g, &run.plan);
    plan.marginal_gains = Some(run.gains.clone());
    plan.exact = Some(false);
    let mut note = format!("J = {}", sig9(run.plan.objective));
    if matches!(cfg.variant, Variant::Node) {
        let b = compute_bounds(g, &cfg, &run)?;
        write!(note, ", U = {}, ratio = {}", sig9(b.upper), sig9(run.plan.objective / b.upper))?;
        if !b.certified {
            note.push_str(" (heuristic oracle: bound not certified)");
        }
        plan.bounds = Some(BoundsEntry::from(&b));
    } else {
        plan.variant_objective = Some(run.variant_objective);
        write!(note, ", variant objective = {}", sig9(run.variant_objective))?;
    }
    note.push('\n');
    emit(plan.to_json(), a.out.as_deref(), note)
}

fn exact(a: &ExactArgs) -> Result<Output> {
    let inst = load(&a.instance)?;
    let g = &inst.graph;
    let k = a.team.unwrap_or(inst.team_size);
    let team = solve_exact_tso(g, k)?;
    let mut plan = PlanFile::from_plan(g, &team.plan);
    plan.exact = Some(true);
    let note = format!(
        "J = {} over {} feasible paths, {} teams scored\n",
        sig9(team.plan.objective),
        team.catalog_size,
        team.teams_scored
    );
    emit(plan.to_json(), a.out.as_deref(), note)
}

fn simulate(a: &SimulateArgs) -> Result<Output> {
    let inst = load(&a.instance)?;
    let g = &inst.graph;
    let text = fs::read_to_string(&a.plan).with_context(|| format!("reading plan {}", a.plan.display()))?;
    let plan = PlanFile::from_json(&text)?;
    let paths = plan.paths(g)?;
    let analytic = plan.recompute(g)?;
    let report = simulate_team(g, &paths, a.trials, a.seed)?;
    let mut out = String::new();
    writeln!(out, "trials,{}", report.trials)?;
    writeln!(out, "mean,{}", sig9(report.mean))?;
    writeln!(out, "std_error,{}", sig9(report.std_error))?;
    writeln!(out, "analytic,{}", sig9(analytic.objective))?;
    for (k, f) in report.survival_freq.iter().enumerate() {
        writeln!(
            out,
            "robot {k} survival,{},expected,{}",
            sig9(*f),
            sig9(analytic.profiles[k].survival())
        )?;
    }
    Ok(Output { stdout: out, stderr: String::new() })
}

fn feasible(a: &FeasibleArgs) -> Result<Output> {
    let inst = load(&a.instance)?;
    let g = &inst.graph;
    let report = feasibility_check(g);
    let mut out = String::new();
    write!(out, "node,outbound,inbound,reachable")?;
    if a.brute_force {
        write!(out, ",brute_force,discrepancy")?;
    }
    out.push('\n');
    let mut mismatches = 0;
    for j in g.nodes() {
        let r = &report.nodes[j.index()];
        write!(out, "{},{},{},{}", g.label(j), sig9(r.outbound), sig9(r.inbound), r.reachable)?;
        if a.brute_force {
            let truth = brute_force_feasibility(g, j)?;
            let differs = truth != r.reachable;
            mismatches += usize::from(differs);
            write!(out, ",{truth},{differs}")?;
        }
        out.push('\n');
    }
    writeln!(out, "nonempty,{}", report.nonempty)?;
    if a.brute_force {
        writeln!(out, "discrepancies,{mismatches}")?;
    }
    Ok(Output { stdout: out, stderr: String::new() })
}

fn bench(a: &BenchArgs) -> Result<Output> {
    let records = run_bench(a.suite, a.oracle, a.seeds, a.seed)?;
    let text = crate::bench::to_csv(&records, a.omit_timing)?;
    emit(text, a.out.as_deref(), String::new())
}
