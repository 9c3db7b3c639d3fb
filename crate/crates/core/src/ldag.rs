//! Local DAGs: per-root acyclic subgraphs capturing most of the LT influence
//! that reaches the root.
//!
//! Construction is greedy. Starting from `{root}` with `Inf(root) = 1`, the
//! outside node with the largest
//!
//! ```text
//! Inf(x) = sum over arcs x -> w into the current set of weight(x, w) * Inf(w)
//! ```
//!
//! is admitted while `Inf(x) >= theta`. An arc between members is kept only
//! when its head was admitted before its tail, which orients every kept arc
//! towards the root and makes the result acyclic.

use std::collections::{BinaryHeap, HashMap};
use std::io::Write;

use log::debug;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Arc, Graph, NodeId};
use crate::shapley::Coalition;

/// Default influence threshold.
pub const DEFAULT_THETA: f64 = 1.0 / 320.0;

/// Local arc between positions in the topological order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalArc {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ldag {
    root: NodeId,
    theta: f64,
    /// Members in topological order; the root is last.
    members: Vec<NodeId>,
    /// `influence[i]` is `Inf(members[i], root)`.
    influence: Vec<f64>,
    arcs: Vec<LocalArc>,
    in_offsets: Vec<usize>,
    in_arcs: Vec<usize>,
    out_offsets: Vec<usize>,
    out_arcs: Vec<usize>,
    position: HashMap<NodeId, usize>,
    dropped_arcs: usize,
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    influence: f64,
    node: NodeId,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.influence
            .total_cmp(&other.influence)
            .then(other.node.cmp(&self.node))
    }
}

pub fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("theta must lie in (0, 1], got {theta}")))
    }
}

/// Greedy LDAG construction for `root`. Requires LT weights.
pub fn build_ldag(g: &Graph, root: NodeId, theta: f64) -> Result<Ldag> {
    g.check_node(root)?;
    check_theta(theta)?;
    g.require_lt_weights()?;
    Ok(build_unchecked(g, root, theta))
}

/// One LDAG per node, built in parallel, indexed by root.
pub fn build_all(g: &Graph, theta: f64) -> Result<Vec<Ldag>> {
    check_theta(theta)?;
    g.require_lt_weights()?;
    Ok((0..g.node_count())
        .into_par_iter()
        .map(|root| build_unchecked(g, root, theta))
        .collect())
}

fn build_unchecked(g: &Graph, root: NodeId, theta: f64) -> Ldag {
    let mut admitted: Vec<(NodeId, f64)> = vec![(root, 1.0)];
    let mut rank: HashMap<NodeId, usize> = HashMap::from([(root, 0)]);
    let mut candidate: HashMap<NodeId, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();

    let mut offer = |x: NodeId, inf: f64, rank: &HashMap<NodeId, usize>, heap: &mut BinaryHeap<Candidate>| {
        for arc in g.in_arcs(x) {
            let y = arc.source;
            if rank.contains_key(&y) || arc.weight == 0.0 {
                continue;
            }
            let c = candidate.entry(y).or_insert(0.0);
            *c += arc.weight * inf;
            heap.push(Candidate { influence: *c, node: y });
        }
    };
    offer(root, 1.0, &rank, &mut heap);

    while let Some(top) = heap.pop() {
        if top.influence < theta {
            break;
        }
        // stale entries: already admitted, or superseded by a larger value
        if rank.contains_key(&top.node) {
            continue;
        }
        rank.insert(top.node, admitted.len());
        admitted.push((top.node, top.influence));
        offer(top.node, top.influence, &rank, &mut heap);
    }

    // topological order is reverse admission order
    let size = admitted.len();
    let members: Vec<NodeId> = admitted.iter().rev().map(|&(v, _)| v).collect();
    let influence: Vec<f64> = admitted.iter().rev().map(|&(_, inf)| inf).collect();
    let position: HashMap<NodeId, usize> = rank.iter().map(|(&v, &r)| (v, size - 1 - r)).collect();

    let mut arcs = Vec::new();
    let mut dropped_arcs = 0;
    for (from, &x) in members.iter().enumerate() {
        for arc in g.out_arcs(x) {
            if let Some(&to) = position.get(&arc.target) {
                if to > from {
                    arcs.push(LocalArc { from, to, weight: arc.weight });
                } else {
                    dropped_arcs += 1;
                }
            }
        }
    }
    if dropped_arcs > 0 {
        debug!("ldag root={root}: dropped {dropped_arcs} arcs against admission order");
    }
    Ldag::assemble(root, theta, members, influence, arcs, position, dropped_arcs)
}

impl Ldag {
    fn assemble(
        root: NodeId,
        theta: f64,
        members: Vec<NodeId>,
        influence: Vec<f64>,
        arcs: Vec<LocalArc>,
        position: HashMap<NodeId, usize>,
        dropped_arcs: usize,
    ) -> Self {
        let p = members.len();
        let index = |key: fn(&LocalArc) -> usize| {
            let mut offsets = vec![0usize; p + 1];
            for a in &arcs {
                offsets[key(a) + 1] += 1;
            }
            for i in 0..p {
                offsets[i + 1] += offsets[i];
            }
            let mut fill = offsets.clone();
            let mut ids = vec![0usize; arcs.len()];
            for (i, a) in arcs.iter().enumerate() {
                ids[fill[key(a)]] = i;
                fill[key(a)] += 1;
            }
            (offsets, ids)
        };
        let (in_offsets, in_arcs) = index(|a| a.to);
        let (out_offsets, out_arcs) = index(|a| a.from);
        Ldag {
            root,
            theta,
            members,
            influence,
            arcs,
            in_offsets,
            in_arcs,
            out_offsets,
            out_arcs,
            position,
            dropped_arcs,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Members in topological order, root last.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn root_position(&self) -> usize {
        self.members.len() - 1
    }

    /// `Inf(x, root)` per member, in topological order.
    pub fn influence(&self) -> &[f64] {
        &self.influence
    }

    pub fn arcs(&self) -> &[LocalArc] {
        &self.arcs
    }

    /// Arcs among members that were discarded to keep the DAG acyclic.
    pub fn dropped_arcs(&self) -> usize {
        self.dropped_arcs
    }

    /// Topological position of a global node, if it is a member.
    pub fn position(&self, v: NodeId) -> Option<usize> {
        self.position.get(&v).copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.position.contains_key(&v)
    }

    pub fn in_arcs(&self, i: usize) -> impl Iterator<Item = &LocalArc> + '_ {
        self.in_arcs[self.in_offsets[i]..self.in_offsets[i + 1]]
            .iter()
            .map(move |&a| &self.arcs[a])
    }

    pub fn out_arcs(&self, i: usize) -> impl Iterator<Item = &LocalArc> + '_ {
        self.out_arcs[self.out_offsets[i]..self.out_offsets[i + 1]]
            .iter()
            .map(move |&a| &self.arcs[a])
    }

    /// Root activation probability with the members flagged in `seeded`
    /// (indexed by topological position) active. `scratch` must have one
    /// slot per member.
    pub fn activation_local(&self, seeded: &[bool], scratch: &mut [f64]) -> f64 {
        for i in 0..self.members.len() {
            scratch[i] = if seeded[i] {
                1.0
            } else {
                self.in_arcs(i).map(|a| a.weight * scratch[a.from]).sum()
            };
        }
        scratch[self.root_position()]
    }

    /// Per-member activation probabilities given `seeded`.
    pub fn activation_profile(&self, seeded: &[bool]) -> Vec<f64> {
        let mut ap = vec![0.0; self.len()];
        self.activation_local(seeded, &mut ap);
        ap
    }

    /// Seed flags by topological position for a global coalition.
    pub fn seeded_mask(&self, c: &Coalition) -> Result<Vec<bool>> {
        let mut seeded = vec![false; self.len()];
        for &v in c.members() {
            let i = self.position(v).ok_or_else(|| {
                Error::validation(format!("node {v} is not a member of the LDAG rooted at {}", self.root))
            })?;
            seeded[i] = true;
        }
        Ok(seeded)
    }

    /// The member subgraph with retained arcs, as a standalone graph whose
    /// node `i` is the member at topological position `i`.
    pub fn to_graph(&self, g: &Graph) -> Result<Graph> {
        let labels = self.members.iter().map(|&v| g.label(v).to_string()).collect();
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc { source: a.from, target: a.to, weight: a.weight })
            .collect();
        Graph::new(labels, arcs, crate::graph::Directedness::Directed)
    }

    /// Writes the LDAG as an edge list headed by `# root=R theta=T`.
    pub fn write_edge_list<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        writeln!(out, "# root={} theta={}", g.label(self.root), self.theta)?;
        for a in &self.arcs {
            writeln!(
                out,
                "{} {} {}",
                g.label(self.members[a.from]),
                g.label(self.members[a.to]),
                a.weight
            )?;
        }
        Ok(())
    }
}

/// Exact LT activation probability of the root of `d` given coalition `c`.
pub fn activation_probability(d: &Ldag, c: &Coalition) -> Result<f64> {
    let seeded = d.seeded_mask(c)?;
    let mut scratch = vec![0.0; d.len()];
    Ok(d.activation_local(&seeded, &mut scratch))
}
