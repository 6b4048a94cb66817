//! JSON instance and plan files.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TsoError};
use crate::graph::{Path, SurvivalGraph};
use crate::greedy::BoundCertificate;
use crate::objective::{EdgeRewards, MultiVisitTable, TeamPlan};

pub const FORMAT_VERSION: u32 = 1;

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: i64,
    #[serde(default = "unit")]
    pub priority: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: i64,
    pub to: i64,
    pub survival: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiVisitEntry {
    #[serde(rename = "M")]
    pub max_visits: usize,
    /// One row per node, in the order of `nodes`.
    pub d: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRewardEntry {
    pub from: i64,
    pub to: i64,
    pub d: f64,
}

/// On-disk instance. Undirected edges stand for one edge in each direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub directed: bool,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
    pub start: i64,
    pub terminal: i64,
    pub p_s: f64,
    pub team_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multi_visit: Option<MultiVisitEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_rewards: Option<Vec<EdgeRewardEntry>>,
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: SurvivalGraph,
    pub team_size: usize,
    pub multi_visit: Option<MultiVisitTable>,
    pub edge_rewards: Option<EdgeRewards>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        if self.version != FORMAT_VERSION {
            return Err(TsoError::Format(format!("unsupported version {}, expected {FORMAT_VERSION}", self.version)));
        }
        let mut b = SurvivalGraph::builder();
        for n in &self.nodes {
            b = b.node(n.id, n.priority);
        }
        for e in &self.edges {
            b = if self.directed { b.edge(e.from, e.to, e.survival) } else { b.undirected_edge(e.from, e.to, e.survival) };
        }
        let graph = b.start(self.start).terminal(self.terminal).threshold(self.p_s).build()?;
        let multi_visit = self.multi_visit.map(|m| MultiVisitTable::new(m.max_visits, m.d)).transpose()?;
        let edge_rewards = match self.edge_rewards {
            None => None,
            Some(list) => {
                let mut triples = Vec::with_capacity(list.len());
                for r in list {
                    let lookup = |l: i64| {
                        graph.node_by_label(l).ok_or_else(|| TsoError::EdgeReward(format!("unknown node {l}")))
                    };
                    triples.push((lookup(r.from)?, lookup(r.to)?, r.d));
                }
                Some(EdgeRewards::new(&graph, &triples)?)
            }
        };
        Ok(Instance { graph, team_size: self.team_size, multi_visit, edge_rewards })
    }

    /// Directed encoding of `inst`. Symmetric graphs are written as undirected.
    pub fn from_instance(inst: &Instance) -> Self {
        let g = &inst.graph;
        let pairs: HashSet<(usize, usize)> = g.edges().iter().map(|e| (e.from.index(), e.to.index())).collect();
        let symmetric = g.edges().iter().all(|e| {
            pairs.contains(&(e.to.index(), e.from.index())) && g.survival(e.to, e.from) == Some(e.survival)
        });
        let edges = g
            .edges()
            .iter()
            .filter(|e| !symmetric || e.from < e.to)
            .map(|e| EdgeEntry { from: g.label(e.from), to: g.label(e.to), survival: e.survival })
            .collect();
        InstanceFile {
            version: FORMAT_VERSION,
            directed: !symmetric,
            nodes: g.nodes().map(|j| NodeEntry { id: g.label(j), priority: g.priority(j) }).collect(),
            edges,
            start: g.label(g.start()),
            terminal: g.label(g.terminal()),
            p_s: g.p_s(),
            team_size: inst.team_size,
            multi_visit: inst
                .multi_visit
                .as_ref()
                .map(|t| MultiVisitEntry { max_visits: t.max_visits(), d: t.rows().to_vec() }),
            edge_rewards: inst.edge_rewards.as_ref().map(|r| {
                g.edges()
                    .iter()
                    .zip(r.by_edge())
                    .filter(|(_, d)| **d > 0.0)
                    .map(|(e, d)| EdgeRewardEntry { from: g.label(e.from), to: g.label(e.to), d: *d })
                    .collect()
            }),
        }
    }
}

impl Instance {
    pub fn new(graph: SurvivalGraph, team_size: usize) -> Self {
        Instance { graph, team_size, multi_visit: None, edge_rewards: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<InstanceFile>(text)?.into_instance()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(self)).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsEntry {
    #[serde(rename = "U1")]
    pub u1: f64,
    #[serde(rename = "U2")]
    pub u2: Option<f64>,
    #[serde(rename = "U3")]
    pub u3: Option<f64>,
    #[serde(rename = "U")]
    pub upper: f64,
    pub factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oversize_factor: Option<f64>,
    pub certified: bool,
}

impl From<&BoundCertificate> for BoundsEntry {
    fn from(b: &BoundCertificate) -> Self {
        BoundsEntry {
            u1: b.u1,
            u2: b.u2,
            u3: b.u3,
            upper: b.upper,
            factor: b.factor,
            oversize_factor: b.oversize_factor,
            certified: b.certified,
        }
    }
}

/// On-disk plan. Paths are written with node labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    pub paths: Vec<Vec<i64>>,
    pub objective: f64,
    pub per_node_visit_prob: Vec<f64>,
    pub per_path_survival: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal_gains: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

impl PlanFile {
    pub fn from_plan(g: &SurvivalGraph, plan: &TeamPlan) -> Self {
        PlanFile {
            paths: plan.paths.iter().map(|p| g.path_labels(p)).collect(),
            objective: plan.objective,
            per_node_visit_prob: plan.visit_prob.clone(),
            per_path_survival: plan.path_survivals(),
            variant_objective: None,
            marginal_gains: None,
            bounds: None,
            exact: None,
        }
    }

    pub fn paths(&self, g: &SurvivalGraph) -> Result<Vec<Path>> {
        self.paths.iter().map(|p| g.path_from_labels(p)).collect()
    }

    /// Re-evaluates the stored paths on `g`.
    pub fn recompute(&self, g: &SurvivalGraph) -> Result<TeamPlan> {
        TeamPlan::evaluate(g, self.paths(g)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan serializes");
        s.push('\n');
        s
    }
}
