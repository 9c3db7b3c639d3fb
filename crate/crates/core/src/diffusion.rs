//! Independent Cascade and Linear Threshold simulation, Monte Carlo spread
//! estimation, and exact live-edge oracles for small instances.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, domain};

/// Largest arc count accepted by [`exact_spread_ic`].
pub const MAX_IC_ORACLE_ARCS: usize = 20;
/// Largest number of in-arc selections accepted by [`exact_spread_lt`].
pub const MAX_LT_ORACLE_CONFIGS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiffusionModel {
    /// Arc weight is an independent one-shot activation probability.
    Ic,
    /// Arc weight is an influence weight; thresholds are uniform per run.
    Lt,
}

impl FromStr for DiffusionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(DiffusionModel::Ic),
            "lt" => Ok(DiffusionModel::Lt),
            other => Err(Error::validation(format!("unknown diffusion model `{other}`"))),
        }
    }
}

impl fmt::Display for DiffusionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiffusionModel::Ic => "ic",
            DiffusionModel::Lt => "lt",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpreadEstimate {
    pub mean: f64,
    /// Sample standard deviation of the per-run spread (0 for a single run).
    pub stddev: f64,
    pub runs: usize,
}

impl SpreadEstimate {
    pub fn std_error(&self) -> f64 {
        self.stddev / (self.runs as f64).sqrt()
    }

    /// Two-pass mean and sample deviation of per-run counts.
    pub fn from_counts(counts: &[usize]) -> Self {
        let runs = counts.len();
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / runs as f64;
        let stddev = if runs > 1 {
            let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
            (ss / (runs - 1) as f64).sqrt()
        } else {
            0.0
        };
        SpreadEstimate { mean, stddev, runs }
    }
}

fn validate_seeds(g: &Graph, seeds: &[NodeId]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    for &s in seeds {
        g.check_node(s)?;
    }
    Ok(())
}

fn validate_model(g: &Graph, model: DiffusionModel) -> Result<()> {
    match model {
        DiffusionModel::Ic => Ok(()),
        DiffusionModel::Lt => g.require_lt_weights(),
    }
}

/// Reusable scratch state for repeated cascades on one graph.
pub struct Simulator {
    active: Vec<bool>,
    weight_in: Vec<f64>,
    threshold: Vec<f64>,
    touched: Vec<NodeId>,
    activated: Vec<NodeId>,
}

impl Simulator {
    pub fn new(node_count: usize) -> Self {
        Simulator {
            active: vec![false; node_count],
            weight_in: vec![0.0; node_count],
            // NaN marks an undrawn threshold
            threshold: vec![f64::NAN; node_count],
            touched: Vec::new(),
            activated: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.activated {
            self.active[v] = false;
        }
        for &v in &self.touched {
            self.weight_in[v] = 0.0;
            self.threshold[v] = f64::NAN;
        }
        self.activated.clear();
        self.touched.clear();
    }

    /// Runs one cascade to its fixpoint and returns the number of active
    /// nodes. Inputs are assumed validated.
    pub fn run<R: Rng + ?Sized>(&mut self, g: &Graph, model: DiffusionModel, seeds: &[NodeId], rng: &mut R) -> usize {
        self.reset();
        for &s in seeds {
            if !self.active[s] {
                self.active[s] = true;
                self.activated.push(s);
            }
        }
        // `activated` doubles as the BFS queue: everything after `head` has
        // not yet tried its out-arcs.
        let mut head = 0;
        while head < self.activated.len() {
            let u = self.activated[head];
            head += 1;
            for arc in g.out_arcs(u) {
                let v = arc.target;
                if self.active[v] {
                    continue;
                }
                let fires = match model {
                    DiffusionModel::Ic => rng.gen::<f64>() < arc.weight,
                    DiffusionModel::Lt => {
                        if self.threshold[v].is_nan() {
                            // uniform on (0, 1] so zero-weight arcs never fire
                            self.threshold[v] = 1.0 - rng.gen::<f64>();
                            self.touched.push(v);
                        }
                        self.weight_in[v] += arc.weight;
                        self.weight_in[v] >= self.threshold[v]
                    }
                };
                if fires {
                    self.active[v] = true;
                    self.activated.push(v);
                }
            }
        }
        self.activated.len()
    }

    /// Nodes activated by the last [`Simulator::run`], in activation order.
    pub fn activated(&self) -> &[NodeId] {
        &self.activated
    }
}

/// One stochastic cascade from `seeds`; returns the active set, sorted.
pub fn simulate_once<R: Rng + ?Sized>(
    g: &Graph,
    model: DiffusionModel,
    seeds: &[NodeId],
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    validate_seeds(g, seeds)?;
    validate_model(g, model)?;
    let mut sim = Simulator::new(g.node_count());
    sim.run(g, model, seeds, rng);
    let mut out = sim.activated().to_vec();
    out.sort_unstable();
    Ok(out)
}

/// Monte Carlo estimate of the expected number of active nodes.
///
/// Run `i` draws from stream `i` of `base_seed`, so the estimate does not
/// depend on how runs are scheduled across threads.
pub fn estimate_spread(
    g: &Graph,
    model: DiffusionModel,
    seeds: &[NodeId],
    runs: usize,
    base_seed: u64,
) -> Result<SpreadEstimate> {
    validate_seeds(g, seeds)?;
    validate_model(g, model)?;
    if runs == 0 {
        return Err(Error::validation("at least one run is required"));
    }
    let counts: Vec<usize> = (0..runs)
        .into_par_iter()
        .with_min_len(64)
        .map_init(
            || Simulator::new(g.node_count()),
            |sim, i| {
                let mut rng = rng::stream(base_seed, domain::SPREAD, i as u64);
                sim.run(g, model, seeds, &mut rng)
            },
        )
        .collect();
    Ok(SpreadEstimate::from_counts(&counts))
}

/// Samples an IC live-edge subgraph: arc `i` is live with probability equal
/// to its weight.
pub fn sample_live_arcs_ic<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<bool> {
    g.arcs().iter().map(|a| rng.gen::<f64>() < a.weight).collect()
}

/// Samples an LT live-edge subgraph: every node keeps at most one in-arc,
/// arc `(u, v)` with probability `weight(u, v)`.
pub fn sample_live_arcs_lt<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<bool> {
    let mut live = vec![false; g.arc_count()];
    for v in 0..g.node_count() {
        let mut x = rng.gen::<f64>();
        for &i in g.in_arc_ids(v) {
            let w = g.arcs()[i].weight;
            if x < w {
                live[i] = true;
                break;
            }
            x -= w;
        }
    }
    live
}

/// Marks nodes reachable from `seeds` along live arcs.
pub fn reachable_from(g: &Graph, live: &[bool], seeds: &[NodeId]) -> Vec<bool> {
    let mut reached = vec![false; g.node_count()];
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    for &s in seeds {
        if !reached[s] {
            reached[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for i in g.out_arc_ids(u) {
            let arc = &g.arcs()[i];
            if live[i] && !reached[arc.target] {
                reached[arc.target] = true;
                queue.push_back(arc.target);
            }
        }
    }
    reached
}

/// Exact per-node IC activation probabilities by enumerating all live-arc
/// subsets.
pub fn exact_activation_ic(g: &Graph, seeds: &[NodeId]) -> Result<Vec<f64>> {
    validate_seeds(g, seeds)?;
    let m = g.arc_count();
    if m > MAX_IC_ORACLE_ARCS {
        return Err(Error::TooLarge(format!("{m} arcs, limit {MAX_IC_ORACLE_ARCS}")));
    }
    let mut prob = vec![0.0; g.node_count()];
    let mut live = vec![false; m];
    for mask in 0u32..(1u32 << m) {
        let mut p = 1.0;
        for (i, arc) in g.arcs().iter().enumerate() {
            live[i] = mask >> i & 1 == 1;
            p *= if live[i] { arc.weight } else { 1.0 - arc.weight };
        }
        if p == 0.0 {
            continue;
        }
        for (v, r) in reachable_from(g, &live, seeds).into_iter().enumerate() {
            if r {
                prob[v] += p;
            }
        }
    }
    Ok(prob)
}

/// Exact expected IC spread over all `2^|E|` live-arc subsets.
pub fn exact_spread_ic(g: &Graph, seeds: &[NodeId]) -> Result<f64> {
    Ok(exact_activation_ic(g, seeds)?.iter().sum())
}

/// Exact per-node LT activation probabilities by enumerating every
/// combination of per-node in-arc selections.
pub fn exact_activation_lt(g: &Graph, seeds: &[NodeId]) -> Result<Vec<f64>> {
    validate_seeds(g, seeds)?;
    g.require_lt_weights()?;
    let n = g.node_count();
    let mut configs: u64 = 1;
    for v in 0..n {
        configs = configs.saturating_mul(g.in_degree(v) as u64 + 1);
        if configs > MAX_LT_ORACLE_CONFIGS {
            return Err(Error::TooLarge(format!(
                "more than {MAX_LT_ORACLE_CONFIGS} in-arc selections"
            )));
        }
    }
    // choices[v][0] is "no in-arc"; choices[v][j] for j >= 1 is the j-th in-arc
    let choices: Vec<Vec<(Option<NodeId>, f64)>> = (0..n)
        .map(|v| {
            let total: f64 = g.in_arcs(v).map(|a| a.weight).sum();
            let mut c = vec![(None, (1.0 - total).max(0.0))];
            c.extend(g.in_arcs(v).map(|a| (Some(a.source), a.weight)));
            c
        })
        .collect();
    let mut is_seed = vec![false; n];
    for &s in seeds {
        is_seed[s] = true;
    }

    let mut prob = vec![0.0; n];
    let mut digit = vec![0usize; n];
    let mut state = vec![Reach::Unknown; n];
    let mut chain = Vec::new();
    loop {
        let p: f64 = (0..n).map(|v| choices[v][digit[v]].1).product();
        if p > 0.0 {
            state.fill(Reach::Unknown);
            for v in 0..n {
                // follow the unique live in-arc chain back from v
                chain.clear();
                let mut x = v;
                let verdict = loop {
                    if is_seed[x] {
                        break Reach::Active;
                    }
                    match state[x] {
                        Reach::Active | Reach::Inactive => break state[x],
                        Reach::Visiting => break Reach::Inactive,
                        Reach::Unknown => {}
                    }
                    state[x] = Reach::Visiting;
                    chain.push(x);
                    match choices[x][digit[x]].0 {
                        Some(parent) => x = parent,
                        None => break Reach::Inactive,
                    }
                };
                for &c in &chain {
                    state[c] = verdict;
                }
                if is_seed[v] {
                    state[v] = Reach::Active;
                }
                if state[v] == Reach::Active {
                    prob[v] += p;
                }
            }
        }
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(prob);
            }
            digit[i] += 1;
            if digit[i] < choices[i].len() {
                break;
            }
            digit[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reach {
    Unknown,
    Visiting,
    Active,
    Inactive,
}

/// Exact expected LT spread via the live-edge selection enumeration.
pub fn exact_spread_lt(g: &Graph, seeds: &[NodeId]) -> Result<f64> {
    Ok(exact_activation_lt(g, seeds)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn path3() -> Graph {
        Graph::from_arcs(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn certain_path_activates_everything() {
        let mut r = stream(1, 0, 0);
        assert_eq!(simulate_once(&path3(), DiffusionModel::Ic, &[0], &mut r).unwrap(), vec![0, 1, 2]);
        assert_eq!(simulate_once(&path3(), DiffusionModel::Lt, &[0], &mut r).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn zero_weights_activate_only_seeds() {
        let g = Graph::from_arcs(4, &[(0, 1, 0.0), (1, 2, 0.0), (2, 3, 0.0), (0, 3, 0.0)]).unwrap();
        for model in [DiffusionModel::Ic, DiffusionModel::Lt] {
            for i in 0..200 {
                let mut r = stream(3, 0, i);
                assert_eq!(simulate_once(&g, model, &[0, 2], &mut r).unwrap(), vec![0, 2]);
            }
        }
    }

    #[test]
    fn half_arc_hits_both_outcomes() {
        let g = Graph::from_arcs(2, &[(0, 1, 0.5)]).unwrap();
        let mut hits = 0;
        let trials = 20_000;
        for i in 0..trials {
            let mut r = stream(9, 0, i);
            let out = simulate_once(&g, DiffusionModel::Ic, &[0], &mut r).unwrap();
            assert!(out == vec![0] || out == vec![0, 1]);
            hits += (out.len() == 2) as usize;
        }
        let frac = hits as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 4.0 * (0.25 / trials as f64).sqrt(), "{frac}");
    }

    #[test]
    fn empty_seeds_rejected() {
        let mut r = stream(1, 0, 0);
        assert!(matches!(simulate_once(&path3(), DiffusionModel::Ic, &[], &mut r), Err(Error::EmptySeeds)));
        assert!(matches!(estimate_spread(&path3(), DiffusionModel::Ic, &[], 5, 0), Err(Error::EmptySeeds)));
    }

    #[test]
    fn lt_requires_bounded_in_weights() {
        let g = Graph::from_arcs(3, &[(0, 2, 0.8), (1, 2, 0.8)]).unwrap();
        let mut r = stream(1, 0, 0);
        assert!(simulate_once(&g, DiffusionModel::Lt, &[0], &mut r).is_err());
        assert!(simulate_once(&g, DiffusionModel::Ic, &[0], &mut r).is_ok());
    }

    #[test]
    fn estimate_on_certain_path() {
        let est = estimate_spread(&path3(), DiffusionModel::Ic, &[0], 100, 5).unwrap();
        assert_eq!((est.mean, est.stddev, est.runs), (3.0, 0.0, 100));
    }

    #[test]
    fn all_seeds_give_node_count() {
        let g = Graph::from_arcs(4, &[(0, 1, 0.3), (2, 3, 0.6)]).unwrap();
        let est = estimate_spread(&g, DiffusionModel::Ic, &[0, 1, 2, 3], 50, 1).unwrap();
        assert_eq!(est.mean, 4.0);
    }

    #[test]
    fn exact_ic_examples() {
        let arc = Graph::from_arcs(2, &[(0, 1, 0.5)]).unwrap();
        assert_eq!(exact_spread_ic(&arc, &[0]).unwrap(), 1.5);
        assert_eq!(exact_spread_ic(&path3(), &[0]).unwrap(), 3.0);
        let fork = Graph::from_arcs(3, &[(0, 1, 0.5), (0, 2, 0.5)]).unwrap();
        assert_eq!(exact_spread_ic(&fork, &[0]).unwrap(), 2.0);
    }

    #[test]
    fn exact_ic_refuses_large_instances() {
        let arcs: Vec<_> = (0..21).map(|i| (i, i + 1, 0.5)).collect();
        let g = Graph::from_arcs(22, &arcs).unwrap();
        assert!(matches!(exact_spread_ic(&g, &[0]), Err(Error::TooLarge(_))));
    }

    #[test]
    fn exact_lt_examples() {
        let arc = Graph::from_arcs(2, &[(0, 1, 0.8)]).unwrap();
        assert!((exact_spread_lt(&arc, &[0]).unwrap() - 1.8).abs() < 1e-12);
        let zero = Graph::from_arcs(3, &[(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
        assert_eq!(exact_spread_lt(&zero, &[0]).unwrap(), 1.0);
        let chain = Graph::from_arcs(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        assert!((exact_spread_lt(&chain, &[0]).unwrap() - 1.75).abs() < 1e-12);
    }

    #[test]
    fn exact_lt_handles_cycles() {
        // 0 <-> 1 cycle fed by seed 2; cycles in live selections stay inactive
        let g = Graph::from_arcs(3, &[(0, 1, 0.5), (1, 0, 0.5), (2, 0, 0.5)]).unwrap();
        let p = exact_activation_lt(&g, &[2]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn exact_lt_refuses_large_instances() {
        let mut arcs = Vec::new();
        for v in 0..8 {
            for u in 0..8 {
                if u != v {
                    arcs.push((u, v, 0.1));
                }
            }
        }
        let g = Graph::from_arcs(8, &arcs).unwrap();
        assert!(matches!(exact_spread_lt(&g, &[0]), Err(Error::TooLarge(_))));
    }

    #[test]
    fn lt_live_edges_keep_at_most_one_in_arc() {
        let g = Graph::from_arcs(4, &[(0, 3, 0.3), (1, 3, 0.3), (2, 3, 0.3), (0, 1, 0.9)]).unwrap();
        for i in 0..100 {
            let live = sample_live_arcs_lt(&g, &mut stream(4, 0, i));
            for v in 0..4 {
                let count = g
                    .arcs()
                    .iter()
                    .zip(&live)
                    .filter(|(a, &l)| l && a.target == v)
                    .count();
                assert!(count <= 1);
            }
        }
    }
}
