//! Comparison algorithms: greedy LDAG, CELF lazy greedy, Degree Discount.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::diffusion::{self, DiffusionModel};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::ldag::{self, Ldag};
use crate::rng;
use crate::scores::{by_score_then_id, check_budget, SeedSet};

/// Marginal gain of seeding each member of `d` given `seeded`, indexed by
/// topological position.
///
/// For an unseeded member `x` the root's activation rises by
/// `(1 - ap(x)) * α(x)`, where `α(x)` is the weight of all paths from `x` to
/// the root through unseeded members. One forward and one backward pass
/// give every gain.
pub fn ldag_marginal_gains(d: &Ldag, seeded: &[bool]) -> Vec<f64> {
    let p = d.len();
    let root = d.root_position();
    let mut ap = vec![0.0; p];
    for x in 0..p {
        ap[x] = if seeded[x] {
            1.0
        } else {
            d.in_arcs(x).map(|a| a.weight * ap[a.from]).sum()
        };
    }
    let mut alpha = vec![0.0; p];
    alpha[root] = 1.0;
    for x in (0..root).rev() {
        alpha[x] = d
            .out_arcs(x)
            .filter(|a| !seeded[a.to])
            .map(|a| a.weight * alpha[a.to])
            .sum();
    }
    (0..p)
        .map(|x| if seeded[x] { 0.0 } else { (1.0 - ap[x]) * alpha[x] })
        .collect()
}

/// Greedy maximization of the summed LDAG activation probabilities.
pub struct LdagGreedy {
    node_count: usize,
    ldags: Vec<Ldag>,
    /// `(ldag index, position)` for every LDAG containing the node.
    membership: Vec<Vec<(usize, usize)>>,
    seeded: Vec<Vec<bool>>,
    gains: Vec<Vec<f64>>,
    selected: Vec<bool>,
    picks: Vec<NodeId>,
}

impl LdagGreedy {
    pub fn new(g: &Graph, theta: f64) -> Result<Self> {
        Ok(Self::from_ldags(g.node_count(), ldag::build_all(g, theta)?))
    }

    pub fn from_ldags(node_count: usize, ldags: Vec<Ldag>) -> Self {
        let mut membership = vec![Vec::new(); node_count];
        for (i, d) in ldags.iter().enumerate() {
            for (pos, &v) in d.members().iter().enumerate() {
                membership[v].push((i, pos));
            }
        }
        let seeded: Vec<Vec<bool>> = ldags.iter().map(|d| vec![false; d.len()]).collect();
        let gains = ldags
            .par_iter()
            .zip(&seeded)
            .map(|(d, s)| ldag_marginal_gains(d, s))
            .collect();
        LdagGreedy {
            node_count,
            ldags,
            membership,
            seeded,
            gains,
            selected: vec![false; node_count],
            picks: Vec::new(),
        }
    }

    pub fn ldags(&self) -> &[Ldag] {
        &self.ldags
    }

    pub fn picks(&self) -> &[NodeId] {
        &self.picks
    }

    /// Current incremental spread of every node (0 for selected nodes).
    pub fn marginal_gains(&self) -> Vec<f64> {
        (0..self.node_count)
            .map(|v| self.membership[v].iter().map(|&(i, pos)| self.gains[i][pos]).sum())
            .collect()
    }

    /// Selects the node with the largest incremental spread.
    pub fn step(&mut self) -> Option<NodeId> {
        let gains = self.marginal_gains();
        let pick = (0..self.node_count)
            .filter(|&v| !self.selected[v])
            .min_by(|&a, &b| by_score_then_id(gains[a], a, gains[b], b))?;
        self.selected[pick] = true;
        self.picks.push(pick);
        let touched: Vec<usize> = self.membership[pick]
            .iter()
            .map(|&(i, pos)| {
                self.seeded[i][pos] = true;
                i
            })
            .collect();
        for i in touched {
            self.gains[i] = ldag_marginal_gains(&self.ldags[i], &self.seeded[i]);
        }
        Some(pick)
    }
}

/// Greedy LDAG seed selection.
pub fn greedy_ldag_select(g: &Graph, k: usize, theta: f64) -> Result<SeedSet> {
    check_budget(k, g.node_count())?;
    let mut greedy = LdagGreedy::new(g, theta)?;
    for _ in 0..k {
        greedy.step();
    }
    Ok(SeedSet::from_vec_unchecked(greedy.picks))
}

/// Identifies one spread evaluation inside a greedy run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalTag {
    pub round: usize,
    /// The candidate being added, or `None` for the current seed set.
    pub candidate: Option<NodeId>,
}

/// A source of (estimated) expected spread for greedy maximization.
pub trait SpreadOracle: Sync {
    fn spread(&self, seeds: &[NodeId], tag: EvalTag) -> Result<f64>;
}

/// Monte Carlo spread with a base seed fixed per `(candidate, round)`.
pub struct MonteCarloOracle<'g> {
    pub graph: &'g Graph,
    pub model: DiffusionModel,
    pub runs: usize,
    pub base_seed: u64,
}

impl SpreadOracle for MonteCarloOracle<'_> {
    fn spread(&self, seeds: &[NodeId], tag: EvalTag) -> Result<f64> {
        let node = tag.candidate.map_or(0, |v| v as u64 + 1);
        let seed = rng::derive_seed(
            rng::derive_seed(self.base_seed, rng::domain::LAZY_GREEDY, 0),
            tag.round as u64,
            node,
        );
        Ok(diffusion::estimate_spread(self.graph, self.model, seeds, self.runs, seed)?.mean)
    }
}

/// Exact spread via the live-edge enumeration oracles.
pub struct ExactOracle<'g> {
    pub graph: &'g Graph,
    pub model: DiffusionModel,
}

impl SpreadOracle for ExactOracle<'_> {
    fn spread(&self, seeds: &[NodeId], _tag: EvalTag) -> Result<f64> {
        match self.model {
            DiffusionModel::Ic => diffusion::exact_spread_ic(self.graph, seeds),
            DiffusionModel::Lt => diffusion::exact_spread_lt(self.graph, seeds),
        }
    }
}

fn seed_spread(oracle: &dyn SpreadOracle, seeds: &[NodeId], round: usize) -> Result<f64> {
    if seeds.is_empty() {
        Ok(0.0)
    } else {
        oracle.spread(seeds, EvalTag { round, candidate: None })
    }
}

fn with_candidate(seeds: &[NodeId], v: NodeId) -> Vec<NodeId> {
    let mut s = seeds.to_vec();
    s.push(v);
    s
}

/// Entry of the CELF queue: a marginal gain last computed in `round`.
#[derive(Clone, Copy, Debug)]
pub struct LazyQueueEntry {
    pub node: NodeId,
    pub gain: f64,
    pub round: usize,
}

impl PartialEq for LazyQueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LazyQueueEntry {}

impl PartialOrd for LazyQueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LazyQueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        by_score_then_id(other.gain, other.node, self.gain, self.node)
    }
}

/// CELF lazy greedy over any spread oracle.
pub fn lazy_greedy(node_count: usize, k: usize, oracle: &dyn SpreadOracle) -> Result<SeedSet> {
    check_budget(k, node_count)?;
    let gains: Vec<f64> = (0..node_count)
        .into_par_iter()
        .map(|v| oracle.spread(&[v], EvalTag { round: 0, candidate: Some(v) }))
        .collect::<Result<_>>()?;
    let mut queue: BinaryHeap<LazyQueueEntry> = gains
        .into_iter()
        .enumerate()
        .map(|(node, gain)| LazyQueueEntry { node, gain, round: 0 })
        .collect();

    let mut seeds: Vec<NodeId> = Vec::with_capacity(k);
    let mut current = 0.0;
    for round in 0..k {
        loop {
            let top = queue.pop().expect("queue holds every unselected node");
            if top.round == round {
                seeds.push(top.node);
                break;
            }
            let tag = EvalTag { round, candidate: Some(top.node) };
            let gain = oracle.spread(&with_candidate(&seeds, top.node), tag)? - current;
            queue.push(LazyQueueEntry { node: top.node, gain, round });
        }
        if round + 1 < k {
            current = seed_spread(oracle, &seeds, round + 1)?;
        }
    }
    Ok(SeedSet::from_vec_unchecked(seeds))
}

/// Plain greedy: every round re-evaluates every unselected node.
pub fn plain_greedy(node_count: usize, k: usize, oracle: &dyn SpreadOracle) -> Result<SeedSet> {
    check_budget(k, node_count)?;
    let mut seeds: Vec<NodeId> = Vec::with_capacity(k);
    let mut selected = vec![false; node_count];
    for round in 0..k {
        let current = seed_spread(oracle, &seeds, round)?;
        let gains: Vec<(NodeId, f64)> = (0..node_count)
            .into_par_iter()
            .filter(|&v| !selected[v])
            .map(|v| {
                let tag = EvalTag { round, candidate: Some(v) };
                Ok((v, oracle.spread(&with_candidate(&seeds, v), tag)? - current))
            })
            .collect::<Result<_>>()?;
        let &(pick, _) = gains
            .iter()
            .min_by(|a, b| by_score_then_id(a.1, a.0, b.1, b.0))
            .expect("k <= node_count leaves a candidate");
        selected[pick] = true;
        seeds.push(pick);
    }
    Ok(SeedSet::from_vec_unchecked(seeds))
}

/// CELF lazy greedy with Monte Carlo spread estimates.
pub fn lazy_greedy_select(
    g: &Graph,
    model: DiffusionModel,
    k: usize,
    runs_per_eval: usize,
    base_seed: u64,
) -> Result<SeedSet> {
    if runs_per_eval == 0 {
        return Err(Error::validation("runs per evaluation must be at least 1"));
    }
    if model == DiffusionModel::Lt {
        g.require_lt_weights()?;
    }
    let oracle = MonteCarloOracle { graph: g, model, runs: runs_per_eval, base_seed };
    lazy_greedy(g.node_count(), k, &oracle)
}

/// Degree discount score `d - 2t - (d - t) * t * p`.
pub fn degree_discount(d: usize, t: usize, p: f64) -> f64 {
    let (d, t) = (d as f64, t as f64);
    d - 2.0 * t - (d - t) * t * p
}

#[derive(Clone, Copy, Debug)]
struct DdEntry {
    score: f64,
    node: NodeId,
}

impl PartialEq for DdEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DdEntry {}

impl PartialOrd for DdEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DdEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        by_score_then_id(other.score, other.node, self.score, self.node)
    }
}

/// Degree Discount selection on the undirected projection.
pub fn degree_discount_select(g: &Graph, p: f64, k: usize) -> Result<SeedSet> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::validation(format!("degree discount p must lie in (0, 1], got {p}")));
    }
    check_budget(k, g.node_count())?;
    let n = g.node_count();
    let mut t = vec![0usize; n];
    let mut score: Vec<f64> = (0..n).map(|v| degree_discount(g.degree(v), 0, p)).collect();
    let mut selected = vec![false; n];
    let mut heap: BinaryHeap<DdEntry> = score
        .iter()
        .enumerate()
        .map(|(node, &score)| DdEntry { score, node })
        .collect();
    let mut seeds = Vec::with_capacity(k);
    while seeds.len() < k {
        let e = heap.pop().expect("unselected nodes remain in the heap");
        if selected[e.node] || e.score.to_bits() != score[e.node].to_bits() {
            continue;
        }
        selected[e.node] = true;
        seeds.push(e.node);
        for &u in g.neighbors(e.node) {
            if !selected[u] {
                t[u] += 1;
                score[u] = degree_discount(g.degree(u), t[u], p);
                heap.push(DdEntry { score: score[u], node: u });
            }
        }
    }
    Ok(SeedSet::from_vec_unchecked(seeds))
}
