#![allow(dead_code)]

use infmax::graph::{Graph, NodeId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple digraph with `m` arcs (fewer if the graph is too small).
/// With `lt`, every node's incoming weights sum to at most 1.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, m: usize, lt: bool) -> Graph {
    let mut pairs: Vec<(NodeId, NodeId)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    weighted(rng, n, pairs, lt)
}

/// Random DAG: arcs only go from lower to higher ids.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let pairs = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    weighted(rng, n, pairs, true)
}

fn weighted<R: Rng>(rng: &mut R, n: usize, pairs: Vec<(NodeId, NodeId)>, lt: bool) -> Graph {
    let mut arcs: Vec<(NodeId, NodeId, f64)> = pairs.into_iter().map(|(u, v)| (u, v, rng.gen_range(0.05..1.0))).collect();
    if lt {
        let mut total = vec![0.0; n];
        for &(_, v, w) in &arcs {
            total[v] += w;
        }
        let slack: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..1.5)).collect();
        for a in &mut arcs {
            a.2 /= total[a.1] * slack[a.1];
        }
    }
    Graph::from_arcs(n, &arcs).unwrap()
}

/// Random undirected graph, every pair joined with probability `p`.
pub fn random_undirected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    Graph::from_undirected_edges(n, &edges, 1.0).unwrap()
}

/// Random seed set of `1..=max` distinct nodes.
pub fn random_seeds<R: Rng>(rng: &mut R, n: usize, max: usize) -> Vec<NodeId> {
    let k = rng.gen_range(1..=max.min(n));
    rand::seq::index::sample(rng, n, k).into_vec()
}
