//! Instance generators: random complete digraphs, sparse random graphs, and the two
//! small fixed instances used throughout the tests.

use rand::{Rng, RngCore};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphBuilder, SurvivalGraph};

/// Four nodes labelled 1..=4, start 1, terminal 4:
/// `1→2 (0.9)`, `2→4 (0.9)`, `1→3 (0.8)`, `3→4 (0.8)`, `1→4 (1.0)`.
pub fn diamond(p_s: f64) -> SurvivalGraph {
    SurvivalGraph::builder()
        .nodes(1..=4)
        .edge(1, 2, 0.9)
        .edge(2, 4, 0.9)
        .edge(1, 3, 0.8)
        .edge(3, 4, 0.8)
        .edge(1, 4, 1.0)
        .start(1)
        .terminal(4)
        .threshold(p_s)
        .build()
        .expect("diamond is well formed")
}

/// Independent 64-bit seed for sub-task `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Complete digraph on `v` nodes (labels `0..v`) with survival probabilities drawn
/// uniformly from `[w_min, w_max)`. Start is node 0, terminal node `v - 1`.
pub fn random_complete(v: usize, w_min: f64, w_max: f64, p_s: f64, seed: u64) -> SurvivalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = SurvivalGraph::builder().nodes(0..v as i64);
    for i in 0..v as i64 {
        for j in 0..v as i64 {
            if i != j {
                b = b.edge(i, j, draw(&mut rng, w_min, w_max));
            }
        }
    }
    b.start(0).terminal(v as i64 - 1).threshold(p_s).build().expect("generated instance is valid")
}

/// Random digraph keeping each ordered pair with probability `density`. When `depot`
/// is set the start doubles as the terminal. Priorities are drawn from `[0.5, 2)`.
pub fn random_sparse(v: usize, density: f64, w_min: f64, w_max: f64, p_s: f64, depot: bool, seed: u64) -> SurvivalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = SurvivalGraph::builder();
    for i in 0..v as i64 {
        b = b.node(i, rng.gen_range(0.5..2.0));
    }
    for i in 0..v as i64 {
        for j in 0..v as i64 {
            if i != j && rng.gen_bool(density) {
                b = b.edge(i, j, draw(&mut rng, w_min, w_max));
            }
        }
    }
    let terminal = if depot { 0 } else { v as i64 - 1 };
    b.start(0).terminal(terminal).threshold(p_s).build().expect("generated instance is valid")
}

/// Edges of the 19-node hexagonal patch, as `(a, b, safe)` pairs.
///
/// Node 0 is the centre, 1..=6 the inner ring (clockwise from the top), 7..=18 the
/// outer ring (clockwise from the top). The six centre spokes are the safe edges.
pub const HEX_EDGES: [(i64, i64, bool); 42] = [
    (0, 1, true),
    (0, 2, true),
    (0, 3, true),
    (0, 4, true),
    (0, 5, true),
    (0, 6, true),
    (1, 2, false),
    (1, 6, false),
    (1, 7, false),
    (1, 8, false),
    (1, 18, false),
    (2, 3, false),
    (2, 8, false),
    (2, 9, false),
    (2, 10, false),
    (3, 4, false),
    (3, 10, false),
    (3, 11, false),
    (3, 12, false),
    (4, 5, false),
    (4, 12, false),
    (4, 13, false),
    (4, 14, false),
    (5, 6, false),
    (5, 14, false),
    (5, 15, false),
    (5, 16, false),
    (6, 16, false),
    (6, 17, false),
    (6, 18, false),
    (7, 8, false),
    (7, 18, false),
    (8, 9, false),
    (9, 10, false),
    (10, 11, false),
    (11, 12, false),
    (12, 13, false),
    (13, 14, false),
    (14, 15, false),
    (15, 16, false),
    (16, 17, false),
    (17, 18, false),
];

pub const HEX_SAFE: f64 = 0.98;
pub const HEX_UNSAFE: f64 = 0.91;

/// Undirected hex instance with the depot at the centre (start = terminal = 0).
pub fn hex(p_s: f64) -> SurvivalGraph {
    hex_builder().start(0).terminal(0).threshold(p_s).build().expect("hex preset is valid")
}

fn hex_builder() -> GraphBuilder {
    HEX_EDGES.iter().fold(SurvivalGraph::builder().nodes(0..19), |b, &(x, y, safe)| {
        b.undirected_edge(x, y, if safe { HEX_SAFE } else { HEX_UNSAFE })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_shape() {
        let g = hex(0.7);
        assert_eq!(g.node_count(), 19);
        assert_eq!(g.edges().len(), 84);
        assert!(g.edges().iter().all(|e| e.survival == HEX_SAFE || e.survival == HEX_UNSAFE));
        // centre has six neighbours, inner ring six, outer ring three or four
        let degree = |j: usize| g.out_edges(crate::graph::NodeId(j)).len();
        assert_eq!(degree(0), 6);
        assert!((1..=6).all(|j| degree(j) == 6));
        assert!((7..=18).all(|j| degree(j) == 3 || degree(j) == 4));
    }

    #[test]
    fn generators_are_seeded() {
        let a = random_complete(6, 0.3, 1.0, 0.7, 9);
        let b = random_complete(6, 0.3, 1.0, 0.7, 9);
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.edges().len(), 30);
        let c = random_complete(4, 1.0, 1.0, 0.9, 1);
        assert!(c.edges().iter().all(|e| e.survival == 1.0));
    }
}
