//! Seeded synthetic graphs for benchmarks and tests.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, domain};

/// Parameters of [`power_law_digraph`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawParams {
    pub nodes: usize,
    /// Exponent of `P(out-degree = d) ∝ d^-exponent`.
    pub exponent: f64,
    pub min_out: usize,
    pub max_out: usize,
    /// Probability that a target is drawn proportionally to in-degree + 1
    /// rather than uniformly.
    pub attachment: f64,
}

impl Default for PowerLawParams {
    fn default() -> Self {
        PowerLawParams { nodes: 2000, exponent: 2.3, min_out: 2, max_out: 200, attachment: 0.5 }
    }
}

/// Directed graph with power-law out-degrees and all weights 1.
pub fn power_law_digraph(params: PowerLawParams, seed: u64) -> Result<Graph> {
    let PowerLawParams { nodes: n, exponent, min_out, max_out, attachment } = params;
    if n < 2 || min_out == 0 || min_out > max_out || max_out >= n {
        return Err(Error::validation(format!("bad power-law parameters {params:?}")));
    }
    let mut rng = rng::stream(seed, domain::SINGLE, 0);
    let degrees: Vec<usize> = (min_out..=max_out).collect();
    let dist = WeightedIndex::new(degrees.iter().map(|&d| (d as f64).powf(-exponent)))
        .expect("positive weights");

    // every arc target so far, plus one entry per node, for in-degree + 1
    // proportional draws
    let mut pool: Vec<NodeId> = (0..n).collect();
    let mut arcs = Vec::new();
    let mut chosen = Vec::new();
    for u in 0..n {
        let d = degrees[dist.sample(&mut rng)];
        chosen.clear();
        while chosen.len() < d {
            let v = if rng.gen::<f64>() < attachment {
                pool[rng.gen_range(0..pool.len())]
            } else {
                rng.gen_range(0..n)
            };
            if v != u && !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        for &v in &chosen {
            arcs.push((u, v, 1.0));
            pool.push(v);
        }
    }
    Graph::from_arcs(n, &arcs)
}

/// Erdős–Rényi `G(n, p)` on the undirected projection.
pub fn gnp_undirected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = rng::stream(seed, domain::SINGLE, 1);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_undirected_edges(n, &edges, 1.0)
}

/// Sparse random undirected graph with about `avg_degree * n / 2` edges,
/// sampled without the quadratic sweep of [`gnp_undirected`].
pub fn sparse_undirected(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    let mut rng = rng::stream(seed, domain::SINGLE, 2);
    let target = (avg_degree * n as f64 / 2.0).round() as usize;
    let mut edges = std::collections::HashSet::with_capacity(target);
    while edges.len() < target {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Graph::from_undirected_edges(n, &edges, 1.0)
}
