use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Per-node centrality scores indexed by node id.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreTable(Vec<f64>);

impl ScoreTable {
    pub fn new(scores: Vec<f64>) -> Self {
        ScoreTable(scores)
    }

    pub fn zeros(node_count: usize) -> Self {
        ScoreTable(vec![0.0; node_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: NodeId) -> f64 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// All nodes ordered by descending score, ties broken by lower id.
    pub fn ranking(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.0.len()).collect();
        order.sort_by(|&a, &b| by_score_then_id(self.0[a], a, self.0[b], b));
        order
    }

    /// The `k` highest-scoring nodes, ties broken by lower id.
    pub fn top_k(&self, k: usize) -> Result<SeedSet> {
        check_budget(k, self.0.len())?;
        let mut order = self.ranking();
        order.truncate(k);
        Ok(SeedSet(order))
    }
}

/// Descending by score, ascending by id.
pub(crate) fn by_score_then_id(sa: f64, a: NodeId, sb: f64, b: NodeId) -> Ordering {
    sb.total_cmp(&sa).then(a.cmp(&b))
}

pub(crate) fn check_budget(k: usize, node_count: usize) -> Result<()> {
    if k == 0 || k > node_count {
        Err(Error::validation(format!("seed budget k={k} outside 1..={node_count}")))
    } else {
        Ok(())
    }
}

/// Scores for the players of one local game, keyed by global node id.
#[derive(Clone, Debug, PartialEq)]
pub struct PlayerScores {
    pub nodes: Vec<NodeId>,
    pub values: Vec<f64>,
}

impl PlayerScores {
    pub fn get(&self, v: NodeId) -> Option<f64> {
        self.nodes.iter().position(|&u| u == v).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.nodes.iter().copied().zip(self.values.iter().copied())
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Ordered seed nodes; the budget is the length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSet(Vec<NodeId>);

impl SeedSet {
    /// Validates ids against `node_count` and rejects empty or repeated seeds.
    pub fn new(nodes: Vec<NodeId>, node_count: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptySeeds);
        }
        let mut seen = vec![false; node_count];
        for &v in &nodes {
            if v >= node_count {
                return Err(Error::NodeOutOfRange { id: v, node_count });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::validation(format!("node {v} appears twice in the seed set")));
            }
        }
        Ok(SeedSet(nodes))
    }

    pub(crate) fn from_vec_unchecked(nodes: Vec<NodeId>) -> Self {
        SeedSet(nodes)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<NodeId> {
        self.0
    }

    /// The first `k` picks.
    pub fn prefix(&self, k: usize) -> SeedSet {
        SeedSet(self.0[..k.min(self.0.len())].to_vec())
    }
}
