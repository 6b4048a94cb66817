//! Worked examples checked against the brute-force references in `common`.

mod common;

use common::*;
use tso_core::exact_tso::{enumerate_feasible_paths, solve_exact_tso};
use tso_core::generate::diamond;
use tso_core::graph::{brute_force_feasibility, feasibility_check, NodeId, Path, SurvivalGraph};
use tso_core::greedy::{compute_bounds, greedy_survivors, GreedyConfig, Variant};
use tso_core::objective::{
    discrete_derivative, edge_team_objective, multi_visit_objective, poisson_binomial, team_objective, EdgeRewards,
    MultiVisitTable,
};
use tso_core::orienteering::{solve_arc_exact, OrienteeringProblem};

fn labels(g: &SurvivalGraph, l: &[i64]) -> Vec<NodeId> {
    g.path_from_labels(l).unwrap().nodes().to_vec()
}

#[test]
fn diamond_distances_match_enumeration() {
    let g = diamond(0.8);
    let lg = g.log_transform();
    let sp = lg.dijkstra(g.start());
    let brute = min_costs(&g, g.start());
    for j in 0..4 {
        assert!((sp.dist[j] - brute[j]).abs() < 1e-12);
    }
    assert!((sp.dist[1] - 0.105360515657826).abs() < 1e-12);
    let zeta = lg.max_visit_probabilities();
    for (z, want) in zeta.iter().zip([1.0, 0.9, 0.8, 1.0]) {
        assert!((z - want).abs() < 1e-12);
    }
}

#[test]
fn diamond_feasible_set() {
    let g = diamond(0.8);
    let routes = feasible_routes(&g);
    assert_eq!(routes, vec![labels(&g, &[1, 2, 4]), labels(&g, &[1, 4])]);
    let catalog = enumerate_feasible_paths(&g).unwrap();
    let got: Vec<Vec<NodeId>> = catalog.paths.iter().map(|p| p.nodes().to_vec()).collect();
    assert_eq!(got, routes);

    let report = feasibility_check(&g);
    let three = g.node_by_label(3).unwrap();
    let two = g.node_by_label(2).unwrap();
    assert!(!report.reachable(three));
    assert!(!brute_force_feasibility(&g, three).unwrap());
    assert!(report.reachable(two));
    assert!(brute_force_feasibility(&g, two).unwrap());
    assert!(report.nonempty);
}

#[test]
fn diamond_team_values_match_joint_enumeration() {
    let g = diamond(0.8);
    let a = labels(&g, &[1, 2, 4]);
    let b = labels(&g, &[1, 4]);
    let pa = Path::new(a.clone());
    let pb = Path::new(b.clone());

    let pair = team_value(&g, &[a.clone(), a.clone()]);
    assert!((pair - 1.9539).abs() < 1e-12);
    assert!((team_objective(&g, &[pa.clone(), pa.clone()]).unwrap().objective - pair).abs() < 1e-12);

    let single = team_value(&g, &[a.clone()]);
    let gain = discrete_derivative(&g, &pa, std::slice::from_ref(&pa)).unwrap();
    assert!((gain - (pair - single)).abs() < 1e-12);
    assert!((gain - 0.2439).abs() < 1e-12);

    let mixed = team_value(&g, &[a.clone(), b.clone()]);
    let gain = discrete_derivative(&g, &pb, std::slice::from_ref(&pa)).unwrap();
    assert!((gain - (mixed - single)).abs() < 1e-12);
    assert!((gain - 0.19).abs() < 1e-12);
}

#[test]
fn two_profiles_at_096() {
    let g = SurvivalGraph::builder()
        .nodes(1..=2)
        .edge(1, 2, 0.96)
        .start(1)
        .terminal(2)
        .threshold(0.5)
        .build()
        .unwrap();
    let p = g.path_from_labels(&[1, 2]).unwrap();
    let v = team_objective(&g, &[p.clone(), p]).unwrap();
    assert!((v.visit_prob[1] - 0.9984).abs() < 1e-12);
    assert!((team_value(&g, &vec![labels(&g, &[1, 2]); 2]) - 0.9984).abs() < 1e-12);
}

#[test]
fn multi_visit_example() {
    // node 4 is reached with probability 0.81 by both robots
    let g = diamond(0.8);
    let a = labels(&g, &[1, 2, 4]);
    let rows = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.5]];
    let table = MultiVisitTable::new(2, rows.clone()).unwrap();
    let p = Path::new(a.clone());
    let value = multi_visit_objective(&g, &[p.clone(), p], &table).unwrap();
    assert!((value - 1.29195).abs() < 1e-12);
    let brute = joint_expectation(&g, &[a.clone(), a], |r| {
        r.node_visits
            .iter()
            .zip(&rows)
            .map(|(&c, row)| row.iter().take(c).sum::<f64>())
            .sum()
    });
    assert!((value - brute).abs() < 1e-12);
    assert!(MultiVisitTable::new(2, vec![vec![0.5, 1.0]; 4]).is_err());
}

#[test]
fn edge_objective_example() {
    let g = diamond(0.8);
    let a = labels(&g, &[1, 2, 4]);
    let all: Vec<(NodeId, NodeId, f64)> = g.edges().iter().map(|e| (e.from, e.to, 1.0)).collect();
    let unit = EdgeRewards::new(&g, &all).unwrap();
    let p = Path::new(a.clone());
    assert!((edge_team_objective(&g, std::slice::from_ref(&p), &unit).unwrap() - 1.71).abs() < 1e-12);

    let first = [(a[0], a[1], 1.0)];
    let only = EdgeRewards::new(&g, &first).unwrap();
    let value = edge_team_objective(&g, &[p.clone(), p], &only).unwrap();
    let key = (a[0].index(), a[1].index());
    let brute = joint_expectation(&g, &[a.clone(), a.clone()], |r| {
        if r.edge_visits.iter().any(|(k, c)| *k == key && *c > 0) {
            1.0
        } else {
            0.0
        }
    });
    assert!((value - 0.99).abs() < 1e-12);
    assert!((value - brute).abs() < 1e-12);
}

#[test]
fn arc_oracle_on_diamond() {
    let g = diamond(0.8);
    let lg = g.log_transform();
    let one_two = g.edge_index(g.node_by_label(1).unwrap(), g.node_by_label(2).unwrap()).unwrap();
    let mut rewards = vec![0.0; g.edges().len()];
    rewards[one_two] = 1.0;
    let r = solve_arc_exact(&OrienteeringProblem::arcs(&lg, rewards).unwrap()).unwrap();
    assert_eq!(g.path_labels(&r.path), vec![1, 2, 4]);
    let brute = best_route_arc_reward(&g, |a, b| if g.edge_index(NodeId(a), NodeId(b)) == Some(one_two) { 1.0 } else { 0.0 });
    assert_eq!(Some(r.reward), brute);
}

#[test]
fn edge_variant_takes_rewarded_edge() {
    let g = diamond(0.8);
    let a = g.node_by_label(1).unwrap();
    let b = g.node_by_label(2).unwrap();
    let rewards = EdgeRewards::new(&g, &[(a, b, 1.0)]).unwrap();
    let cfg = GreedyConfig::new(2).with_variant(Variant::Edge(rewards));
    let run = greedy_survivors(&g, &cfg).unwrap();
    assert_eq!(g.path_labels(&run.plan.paths[0]), vec![1, 2, 4]);
    assert!((run.gains[0] - 0.9).abs() < 1e-12);
    assert!((run.variant_objective - 0.99).abs() < 1e-12);
}

#[test]
fn multi_visit_without_second_reward_matches_node_objective() {
    let g = tso_core::generate::random_sparse(7, 0.6, 0.5, 1.0, 0.5, true, 8);
    let rows: Vec<Vec<f64>> = g.priorities().iter().map(|&d| vec![d, 0.0]).collect();
    let table = MultiVisitTable::new(2, rows).unwrap();
    let run = greedy_survivors(&g, &GreedyConfig::new(3).with_variant(Variant::MultiVisit(table))).unwrap();
    assert!((run.variant_objective - run.plan.objective).abs() < 1e-12);
}

#[test]
fn greedy_and_exact_on_diamond() {
    let g = diamond(0.8);
    let exact = solve_exact_tso(&g, 2).unwrap();
    let brute = best_team_value(&g, 2);
    assert!((exact.plan.objective - brute).abs() < 1e-12);
    let cfg = GreedyConfig::new(2);
    let run = greedy_survivors(&g, &cfg).unwrap();
    assert_eq!(run.plan.paths, exact.plan.paths);
    let b = compute_bounds(&g, &cfg, &run).unwrap();
    assert!(b.upper >= brute);
}

#[test]
fn five_node_depot_example_has_three_routes() {
    // weights chosen so that exactly three depot loops are feasible
    let g = SurvivalGraph::builder()
        .nodes(1..=5)
        .edge(1, 3, 1.0)
        .edge(3, 5, 0.96)
        .edge(1, 4, 0.8)
        .edge(4, 5, 1.0)
        .edge(5, 2, 0.97)
        .edge(2, 1, 0.97)
        .edge(5, 4, 0.9)
        .edge(4, 1, 0.9)
        .start(1)
        .terminal(1)
        .threshold(0.75)
        .build()
        .unwrap();
    let catalog = enumerate_feasible_paths(&g).unwrap();
    assert_eq!(catalog.len(), 3);
    let got: Vec<Vec<i64>> = catalog.paths.iter().map(|p| g.path_labels(p)).collect();
    assert_eq!(got, vec![vec![1, 3, 5, 2, 1], vec![1, 3, 5, 4, 1], vec![1, 4, 5, 2, 1]]);
    assert_eq!(feasible_routes(&g).len(), 3);
    // the short loop 1 → 4 → 1 exists but is too risky
    assert!(all_routes(&g).contains(&labels(&g, &[1, 4, 1])));
    let depot = g.path_from_labels(&[1, 3, 5, 2, 1]).unwrap();
    let v = team_objective(&g, std::slice::from_ref(&depot)).unwrap();
    assert!((v.visit_prob[0] - depot.survival(&g).unwrap()).abs() < 1e-15);
}

#[test]
fn poisson_binomial_small_cases() {
    let d = poisson_binomial(&[0.9, 0.81]);
    for (a, b) in d.iter().zip([0.019, 0.252, 0.729]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(poisson_binomial(&[]), vec![1.0]);
    let probs = [0.1, 0.5, 0.33, 0.9, 0.01, 0.77, 0.5, 0.62, 0.25, 0.99];
    for (a, b) in poisson_binomial(&probs).iter().zip(success_count_distribution(&probs)) {
        assert!((a - b).abs() < 1e-12);
    }
}
