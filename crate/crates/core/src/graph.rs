//! Instance model: survival-weighted digraphs, their log-cost transform, shortest
//! paths, reachability bounds and feasibility testing.
//!
//! A robot traversing edge `e` survives with probability `ω(e) ∈ (0, 1]`, independently
//! of every other traversal. Taking `-ln ω` turns survival products into additive path
//! costs, so the chance constraint `Π ω ≥ p_s` becomes the budget constraint
//! `Σ -ln ω ≤ -ln p_s`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TsoError};

/// Absolute slack applied to every budget comparison in the log domain.
pub const BUDGET_TOL: f64 = 1e-9;

/// Largest instance the exhaustive routines accept by default.
pub const BRUTE_FORCE_MAX_NODES: usize = 12;

/// Dense node index in `[0, V)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub survival: f64,
}

/// One broken invariant of a [`SurvivalGraph`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyGraph,
    DuplicateLabel(i64),
    NonPositivePriority { node: NodeId, value: f64 },
    SurvivalOutOfRange { from: NodeId, to: NodeId, value: f64 },
    NotSimple { from: NodeId, to: NodeId },
    SelfLoop(NodeId),
    EdgeEndpointOutOfRange { from: NodeId, to: NodeId },
    StartOutOfRange(NodeId),
    TerminalOutOfRange(NodeId),
    ThresholdOutOfRange(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGraph => write!(f, "graph has no nodes"),
            Violation::DuplicateLabel(l) => write!(f, "node id {l} appears more than once"),
            Violation::NonPositivePriority { node, value } => {
                write!(f, "node {node} has non-positive priority {value}")
            }
            Violation::SurvivalOutOfRange { from, to, value } => {
                write!(f, "edge ({from}, {to}) survival {value} is outside (0, 1]")
            }
            Violation::NotSimple { from, to } => {
                write!(f, "edge ({from}, {to}) appears more than once: graph is not simple")
            }
            Violation::SelfLoop(n) => write!(f, "self-loop at node {n}"),
            Violation::EdgeEndpointOutOfRange { from, to } => {
                write!(f, "edge ({from}, {to}) references a missing node")
            }
            Violation::StartOutOfRange(n) => write!(f, "start node {n} does not exist"),
            Violation::TerminalOutOfRange(n) => write!(f, "terminal node {n} does not exist"),
            Violation::ThresholdOutOfRange(p) => {
                write!(f, "survival threshold p_s = {p} is outside (0, 1]")
            }
        }
    }
}

/// Directed graph whose edges carry survival probabilities.
///
/// Node `j` has a priority `d_j > 0` and an external integer label used in files.
/// The instance also fixes the start and terminal nodes and the per-robot survival
/// threshold `p_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalGraph {
    labels: Vec<i64>,
    priorities: Vec<f64>,
    edges: Vec<Edge>,
    // (target, edge index), sorted by target
    out: Vec<Vec<(NodeId, usize)>>,
    start: NodeId,
    terminal: NodeId,
    p_s: f64,
}

impl SurvivalGraph {
    /// Assembles an instance without checking its invariants; see [`SurvivalGraph::validate`].
    pub fn from_parts(
        labels: Vec<i64>,
        priorities: Vec<f64>,
        edges: Vec<Edge>,
        start: NodeId,
        terminal: NodeId,
        p_s: f64,
    ) -> Self {
        let n = labels.len();
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.from.0 < n && e.to.0 < n {
                out[e.from.0].push((e.to, i));
            }
        }
        for list in &mut out {
            list.sort();
        }
        SurvivalGraph { labels, priorities, edges, out, start, terminal, p_s }
    }

    /// Like [`SurvivalGraph::from_parts`] but fails when any invariant is broken.
    pub fn new(
        labels: Vec<i64>,
        priorities: Vec<f64>,
        edges: Vec<Edge>,
        start: NodeId,
        terminal: NodeId,
        p_s: f64,
    ) -> Result<Self> {
        let g = Self::from_parts(labels, priorities, edges, start, terminal, p_s);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(TsoError::InvalidInstance(violations))
        }
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Lists every broken invariant. An empty list means the instance is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.labels.len();
        let mut out = Vec::new();
        if n == 0 {
            out.push(Violation::EmptyGraph);
        }
        let mut seen = HashMap::new();
        for &l in &self.labels {
            if seen.insert(l, ()).is_some() {
                out.push(Violation::DuplicateLabel(l));
            }
        }
        for (j, &d) in self.priorities.iter().enumerate() {
            if !(d > 0.0) || !d.is_finite() {
                out.push(Violation::NonPositivePriority { node: NodeId(j), value: d });
            }
        }
        let mut pairs = HashMap::new();
        for e in &self.edges {
            if e.from.0 >= n || e.to.0 >= n {
                out.push(Violation::EdgeEndpointOutOfRange { from: e.from, to: e.to });
                continue;
            }
            if e.from == e.to {
                out.push(Violation::SelfLoop(e.from));
            }
            if !(e.survival > 0.0 && e.survival <= 1.0) {
                out.push(Violation::SurvivalOutOfRange { from: e.from, to: e.to, value: e.survival });
            }
            let count = pairs.entry((e.from, e.to)).or_insert(0usize);
            *count += 1;
            if *count == 2 {
                out.push(Violation::NotSimple { from: e.from, to: e.to });
            }
        }
        if self.start.0 >= n {
            out.push(Violation::StartOutOfRange(self.start));
        }
        if self.terminal.0 >= n {
            out.push(Violation::TerminalOutOfRange(self.terminal));
        }
        if !(self.p_s > 0.0 && self.p_s <= 1.0) {
            out.push(Violation::ThresholdOutOfRange(self.p_s));
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn terminal(&self) -> NodeId {
        self.terminal
    }

    pub fn p_s(&self) -> f64 {
        self.p_s
    }

    pub fn priority(&self, j: NodeId) -> f64 {
        self.priorities[j.0]
    }

    pub fn priorities(&self) -> &[f64] {
        &self.priorities
    }

    pub fn label(&self, j: NodeId) -> i64 {
        self.labels[j.0]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn node_by_label(&self, label: i64) -> Option<NodeId> {
        self.labels.iter().position(|&l| l == label).map(NodeId)
    }

    /// Out-neighbours of `u` in increasing index order, with the edge index.
    pub fn out_edges(&self, u: NodeId) -> &[(NodeId, usize)] {
        &self.out[u.0]
    }

    pub fn edge_index(&self, from: NodeId, to: NodeId) -> Option<usize> {
        let list = self.out.get(from.0)?;
        list.binary_search_by(|&(t, _)| t.cmp(&to)).ok().map(|k| list[k].1)
    }

    pub fn survival(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.edge_index(from, to).map(|i| self.edges[i].survival)
    }

    /// A copy of this instance with a different survival threshold.
    pub fn with_threshold(&self, p_s: f64) -> Self {
        let mut g = self.clone();
        g.p_s = p_s;
        g
    }

    /// A copy with different node priorities.
    pub fn with_priorities(&self, priorities: Vec<f64>) -> Self {
        assert_eq!(priorities.len(), self.node_count());
        let mut g = self.clone();
        g.priorities = priorities;
        g
    }

    /// Translates a sequence of external labels into a [`Path`].
    pub fn path_from_labels(&self, labels: &[i64]) -> Result<Path> {
        let nodes = labels
            .iter()
            .map(|&l| {
                self.node_by_label(l)
                    .ok_or_else(|| TsoError::InvalidPath(format!("unknown node id {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Path::new(nodes))
    }

    pub fn path_labels(&self, path: &Path) -> Vec<i64> {
        path.nodes().iter().map(|&j| self.label(j)).collect()
    }

    /// Replaces each survival probability by its log cost `-ln ω` and the threshold by
    /// the budget `-ln p_s`.
    pub fn log_transform(&self) -> LogGraph {
        let n = self.node_count();
        let mut adj = vec![Vec::new(); n];
        let mut radj = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            let c = -e.survival.ln();
            // -ln 1 is -0.0 in IEEE arithmetic
            let cost = if c <= 0.0 { 0.0 } else { c };
            adj[e.from.0].push(LogEdge { to: e.to, cost, edge: i });
            radj[e.to.0].push(LogEdge { to: e.from, cost, edge: i });
        }
        for list in adj.iter_mut().chain(radj.iter_mut()) {
            list.sort_by(|a, b| a.to.cmp(&b.to));
        }
        let budget = -self.p_s.ln();
        LogGraph {
            adj,
            radj,
            budget: if budget <= 0.0 { 0.0 } else { budget },
            start: self.start,
            terminal: self.terminal,
        }
    }
}

/// Incremental construction of a [`SurvivalGraph`] keyed by external labels.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<i64>,
    priorities: Vec<f64>,
    index: HashMap<i64, usize>,
    edges: Vec<(i64, i64, f64)>,
    start: Option<i64>,
    terminal: Option<i64>,
    p_s: f64,
}

impl GraphBuilder {
    pub fn node(mut self, label: i64, priority: f64) -> Self {
        self.index.entry(label).or_insert(self.labels.len());
        self.labels.push(label);
        self.priorities.push(priority);
        self
    }

    /// Adds nodes `labels` with unit priority.
    pub fn nodes(mut self, labels: impl IntoIterator<Item = i64>) -> Self {
        for l in labels {
            self = self.node(l, 1.0);
        }
        self
    }

    pub fn edge(mut self, from: i64, to: i64, survival: f64) -> Self {
        self.edges.push((from, to, survival));
        self
    }

    /// Two directed edges sharing one survival probability.
    pub fn undirected_edge(self, a: i64, b: i64, survival: f64) -> Self {
        self.edge(a, b, survival).edge(b, a, survival)
    }

    pub fn start(mut self, label: i64) -> Self {
        self.start = Some(label);
        self
    }

    pub fn terminal(mut self, label: i64) -> Self {
        self.terminal = Some(label);
        self
    }

    pub fn threshold(mut self, p_s: f64) -> Self {
        self.p_s = p_s;
        self
    }

    fn resolve(&self, label: i64) -> NodeId {
        // unknown labels map past the end and surface as range violations
        NodeId(self.index.get(&label).copied().unwrap_or(usize::MAX))
    }

    /// Builds without validation, so tests can construct broken instances.
    pub fn build_unchecked(self) -> SurvivalGraph {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, w)| Edge { from: self.resolve(a), to: self.resolve(b), survival: w })
            .collect();
        let start = self.start.map(|l| self.resolve(l)).unwrap_or(NodeId(0));
        let terminal = self.terminal.map(|l| self.resolve(l)).unwrap_or(start);
        SurvivalGraph::from_parts(self.labels, self.priorities, edges, start, terminal, self.p_s)
    }

    pub fn build(self) -> Result<SurvivalGraph> {
        let g = self.build_unchecked();
        let v = g.validate();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(TsoError::InvalidInstance(v))
        }
    }
}

/// Ordered node sequence `ρ(0), …, ρ(|ρ|)`.
///
/// Nodes are pairwise distinct except that the last node may repeat the first
/// (a return to the depot).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path(Vec<NodeId>);

impl Path {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Path(nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    /// Number of edges `|ρ|`.
    pub fn edge_count(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// The traversed edges `(ρ(n-1), ρ(n))` for `n = 1..=|ρ|`.
    pub fn steps(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn first(&self) -> Option<NodeId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<NodeId> {
        self.0.last().copied()
    }

    /// Checks node uniqueness (allowing a closing return to the first node) and that
    /// every step is an edge of `g`.
    pub fn check(&self, g: &SurvivalGraph) -> Result<()> {
        if self.0.is_empty() {
            return Err(TsoError::InvalidPath("empty node sequence".into()));
        }
        let n = g.node_count();
        let mut seen = vec![false; n];
        let last = self.0.len() - 1;
        for (k, &j) in self.0.iter().enumerate() {
            if j.0 >= n {
                return Err(TsoError::InvalidPath(format!("node {j} does not exist")));
            }
            let closing = k == last && k > 0 && j == self.0[0];
            if seen[j.0] && !closing {
                return Err(TsoError::InvalidPath(format!("node {j} repeats")));
            }
            seen[j.0] = true;
        }
        for (a, b) in self.steps() {
            if g.edge_index(a, b).is_none() {
                return Err(TsoError::MissingEdge { from: a, to: b });
            }
        }
        Ok(())
    }

    /// Survival probability of the whole path, `Π ω(e)`.
    pub fn survival(&self, g: &SurvivalGraph) -> Result<f64> {
        self.steps().try_fold(1.0, |acc, (a, b)| {
            g.survival(a, b).map(|w| acc * w).ok_or(TsoError::MissingEdge { from: a, to: b })
        })
    }

    /// Summed log cost on `lg`.
    pub fn log_cost(&self, lg: &LogGraph) -> Option<f64> {
        self.steps().try_fold(0.0, |acc, (a, b)| lg.cost(a, b).map(|c| acc + c))
    }

    /// Whether this path belongs to the feasible set: valid, at least one edge,
    /// `v_s → v_t`, survival at least `p_s` (within [`BUDGET_TOL`] in the log domain).
    pub fn is_feasible(&self, g: &SurvivalGraph) -> bool {
        if self.check(g).is_err() || self.edge_count() == 0 {
            return false;
        }
        if self.first() != Some(g.start()) || self.last() != Some(g.terminal()) {
            return false;
        }
        let lg = g.log_transform();
        matches!(self.log_cost(&lg), Some(c) if c <= lg.budget() + BUDGET_TOL)
    }
}

/// Adjacency entry of a [`LogGraph`]. In the reverse adjacency `to` is the edge's source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEdge {
    pub to: NodeId,
    pub cost: f64,
    /// Index into [`SurvivalGraph::edges`].
    pub edge: usize,
}

/// Log-cost view of a [`SurvivalGraph`]: edge costs `-ln ω`, budget `-ln p_s`.
#[derive(Debug, Clone)]
pub struct LogGraph {
    adj: Vec<Vec<LogEdge>>,
    radj: Vec<Vec<LogEdge>>,
    budget: f64,
    start: NodeId,
    terminal: NodeId,
}

/// Single-source shortest-path tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    pub source: NodeId,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<NodeId>>,
}

impl ShortestPaths {
    /// Node sequence from the source to `target`, if reachable.
    pub fn path_to(&self, target: NodeId) -> Option<Vec<NodeId>> {
        if !self.dist[target.0].is_finite() {
            return None;
        }
        let mut seq = vec![target];
        let mut cur = target;
        while cur != self.source {
            cur = self.parent[cur.0]?;
            seq.push(cur);
        }
        seq.reverse();
        Some(seq)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, NodeId);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (distance, index)
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl LogGraph {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn terminal(&self) -> NodeId {
        self.terminal
    }

    pub fn out(&self, u: NodeId) -> &[LogEdge] {
        &self.adj[u.0]
    }

    pub fn incoming(&self, v: NodeId) -> &[LogEdge] {
        &self.radj[v.0]
    }

    pub fn arc(&self, from: NodeId, to: NodeId) -> Option<&LogEdge> {
        let list = &self.adj[from.0];
        list.binary_search_by(|a| a.to.cmp(&to)).ok().map(|k| &list[k])
    }

    pub fn cost(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.arc(from, to).map(|a| a.cost)
    }

    /// Dijkstra from `source` over all edges.
    pub fn dijkstra(&self, source: NodeId) -> ShortestPaths {
        self.dijkstra_filtered(source, |_, _| false)
    }

    /// Dijkstra from `source` skipping every edge for which `removed` returns true.
    ///
    /// Equal-distance relaxations keep the lower-indexed parent.
    pub fn dijkstra_filtered<F>(&self, source: NodeId, removed: F) -> ShortestPaths
    where
        F: Fn(NodeId, NodeId) -> bool,
    {
        let (dist, parent) = run_dijkstra(&self.adj, source, removed);
        ShortestPaths { source, dist, parent }
    }

    /// Distances from every node *to* `target`.
    pub fn distances_to(&self, target: NodeId) -> Vec<f64> {
        run_dijkstra(&self.radj, target, |_, _| false).0
    }

    /// `ζ_j = exp(-dist(v_s, j))`: the largest probability that a robot leaving the
    /// start reaches node `j` at all. Zero for nodes with no route from the start.
    pub fn max_visit_probabilities(&self) -> Vec<f64> {
        self.dijkstra(self.start)
            .dist
            .iter()
            .map(|&d| if d.is_finite() { (-d).exp() } else { 0.0 })
            .collect()
    }

    /// All-pairs shortest distances (one Dijkstra per node).
    pub fn all_pairs(&self) -> Vec<Vec<f64>> {
        (0..self.node_count()).map(|s| self.dijkstra(NodeId(s)).dist).collect()
    }

    /// Cost of the cheapest feasible-shaped route: the shortest `v_s → v_t` path, or,
    /// when `v_s = v_t`, the shortest cycle through the depot.
    pub fn shortest_route_cost(&self) -> f64 {
        if self.start != self.terminal {
            return self.dijkstra(self.start).dist[self.terminal.0];
        }
        let back = self.distances_to(self.start);
        self.adj[self.start.0]
            .iter()
            .map(|a| a.cost + back[a.to.0])
            .fold(f64::INFINITY, f64::min)
    }
}

fn run_dijkstra<F>(
    adj: &[Vec<LogEdge>],
    source: NodeId,
    removed: F,
) -> (Vec<f64>, Vec<Option<NodeId>>)
where
    F: Fn(NodeId, NodeId) -> bool,
{
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source.0] = 0.0;
    heap.push(HeapItem(0.0, source));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if done[u.0] {
            continue;
        }
        done[u.0] = true;
        for &LogEdge { to: v, cost: c, .. } in &adj[u.0] {
            if done[v.0] || removed(u, v) {
                continue;
            }
            let nd = d + c;
            if nd < dist[v.0] {
                dist[v.0] = nd;
                parent[v.0] = Some(u);
                heap.push(HeapItem(nd, v));
            } else if nd == dist[v.0] && parent[v.0].is_some_and(|p| u < p) {
                parent[v.0] = Some(u);
            }
        }
    }
    (dist, parent)
}

/// Per-node outcome of the two-leg deletion test.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeReach {
    pub reachable: bool,
    /// Shortest `v_s → j` cost.
    pub outbound: f64,
    /// Shortest `j → v_t` cost after deleting the outbound leg's edges.
    pub inbound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub nodes: Vec<NodeReach>,
    /// Whether at least one feasible path exists.
    pub nonempty: bool,
    pub budget: f64,
}

impl FeasibilityReport {
    pub fn reachable(&self, j: NodeId) -> bool {
        self.nodes[j.0].reachable
    }
}

/// Per-node reachability via the two-leg deletion procedure.
///
/// For node `j`: take the shortest `v_s → j` path, delete its (directed) edges, then take
/// the shortest `j → v_t` path; `j` is flagged reachable when the two costs sum to at most
/// the budget. The overall flag is computed exactly from the cheapest route (see
/// [`LogGraph::shortest_route_cost`]).
pub fn feasibility_check(g: &SurvivalGraph) -> FeasibilityReport {
    let lg = g.log_transform();
    let budget = lg.budget();
    let from_start = lg.dijkstra(g.start());
    let nodes = g
        .nodes()
        .map(|j| {
            let outbound = from_start.dist[j.0];
            let Some(leg) = from_start.path_to(j) else {
                return NodeReach { reachable: false, outbound, inbound: f64::INFINITY };
            };
            let used: Vec<(NodeId, NodeId)> = leg.windows(2).map(|w| (w[0], w[1])).collect();
            let back = lg.dijkstra_filtered(j, |a, b| used.contains(&(a, b)));
            let inbound = back.dist[g.terminal().0];
            NodeReach { reachable: outbound + inbound <= budget + BUDGET_TOL, outbound, inbound }
        })
        .collect();
    let nonempty = lg.shortest_route_cost() <= budget + BUDGET_TOL;
    FeasibilityReport { nodes, nonempty, budget }
}

/// Relaxed reachability: `dist(v_s, j) + dist(j, v_t) ≤ budget`, with no edge deletion.
///
/// Every node lying on some feasible path passes, so this is a sound superset of the
/// nodes any robot can collect. The start node is excluded unless it is also the
/// terminal (visits count from step one onwards).
pub fn relaxed_reachable(lg: &LogGraph) -> Vec<bool> {
    let out = lg.dijkstra(lg.start()).dist;
    let back = lg.distances_to(lg.terminal());
    let route_ok = lg.shortest_route_cost() <= lg.budget() + BUDGET_TOL;
    (0..lg.node_count())
        .map(|j| {
            if j == lg.start().0 {
                return lg.start() == lg.terminal() && route_ok;
            }
            route_ok && out[j] + back[j] <= lg.budget() + BUDGET_TOL
        })
        .collect()
}

/// Exact reachability of `j` by exhaustive enumeration of simple paths.
///
/// Returns a witness path through `j` with survival at least `p_s - 1e-12`, or `None`.
pub fn brute_force_witness(g: &SurvivalGraph, j: NodeId) -> Result<Option<Path>> {
    if g.node_count() > BRUTE_FORCE_MAX_NODES {
        return Err(TsoError::Guard(format!(
            "brute-force feasibility supports at most {BRUTE_FORCE_MAX_NODES} nodes, got {}",
            g.node_count()
        )));
    }
    let target = g.p_s() - 1e-12;
    let mut stack = vec![g.start()];
    let mut on_path = vec![false; g.node_count()];
    on_path[g.start().0] = true;
    Ok(witness_dfs(g, j, target, 1.0, &mut stack, &mut on_path).map(Path::new))
}

fn witness_dfs(
    g: &SurvivalGraph,
    j: NodeId,
    target: f64,
    survival: f64,
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
) -> Option<Vec<NodeId>> {
    let u = *stack.last().unwrap();
    for &(v, e) in g.out_edges(u) {
        let s = survival * g.edges()[e].survival;
        if s < target {
            continue;
        }
        if v == g.terminal() {
            if v == j || stack.contains(&j) {
                let mut p = stack.clone();
                p.push(v);
                return Some(p);
            }
            // a path may not continue through its terminal
            continue;
        }
        if on_path[v.0] {
            continue;
        }
        on_path[v.0] = true;
        stack.push(v);
        let found = witness_dfs(g, j, target, s, stack, on_path);
        stack.pop();
        on_path[v.0] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Exact counterpart of [`feasibility_check`] for a single node.
pub fn brute_force_feasibility(g: &SurvivalGraph, j: NodeId) -> Result<bool> {
    Ok(brute_force_witness(g, j)?.is_some())
}
