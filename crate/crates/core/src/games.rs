//! Power indices of the activation game on local DAGs.
//!
//! Every LDAG defines a cooperative game whose players are its members and
//! whose value `ν(C)` is the root's LT activation probability when `C` is
//! seeded. Shapley values are estimated by permutation sampling; Banzhaf
//! indices use the fact that a player's marginal contribution factors into
//! a term that depends only on its ancestors and a term that depends only on
//! its descendants:
//!
//! ```text
//! ν(C ∪ {v}) - ν(C) = (1 - ap(v | C ∩ anc(v))) * α(v | C ∩ desc(v))
//! ```
//!
//! where `α` is the total weight of paths from `v` to the root that avoid
//! seeded nodes. The two factors are sampled independently.
//!
//! Per-LDAG indices are plain tables and merge by summation, so they can be
//! computed anywhere and combined later.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::ldag::{self, Ldag};
use crate::rng::{self, domain, Stream};
use crate::scores::{PlayerScores, ScoreTable, SeedSet};
use crate::shapley::{banzhaf_from_values, shapley_from_values, Coalition, MAX_BANZHAF_PLAYERS, MAX_SHAPLEY_PLAYERS};

/// Cone size limit for exhaustive evaluation of one Banzhaf factor.
pub const MAX_EXHAUSTIVE_CONE: usize = 20;

/// Default Monte Carlo budget per LDAG game.
pub const DEFAULT_BUDGET: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Shapley,
    Banzhaf,
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shapley" | "sv" => Ok(IndexKind::Shapley),
            "banzhaf" | "bi" => Ok(IndexKind::Banzhaf),
            other => Err(Error::validation(format!("unknown index kind `{other}`"))),
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Shapley => "shapley",
            IndexKind::Banzhaf => "banzhaf",
        })
    }
}

/// The activation game of one LDAG. Player `i` is the member at
/// topological position `i`.
#[derive(Clone, Copy, Debug)]
pub struct LdagGame<'a> {
    ldag: &'a Ldag,
}

impl<'a> LdagGame<'a> {
    pub fn new(ldag: &'a Ldag) -> Self {
        LdagGame { ldag }
    }

    pub fn ldag(&self) -> &'a Ldag {
        self.ldag
    }

    pub fn players(&self) -> &'a [NodeId] {
        self.ldag.members()
    }

    pub fn player_count(&self) -> usize {
        self.ldag.len()
    }

    /// `ν(C)` for a coalition of global node ids.
    pub fn value(&self, c: &Coalition) -> Result<f64> {
        ldag::activation_probability(self.ldag, c)
    }

    fn scores(&self, values: Vec<f64>) -> PlayerScores {
        PlayerScores { nodes: self.players().to_vec(), values }
    }

    fn local(&self, v: NodeId) -> Result<usize> {
        self.ldag.position(v).ok_or_else(|| {
            Error::validation(format!("node {v} is not a player of the LDAG rooted at {}", self.ldag.root()))
        })
    }

    /// Marginal contributions along one ordering of players (local
    /// indices), computed by incremental forward propagation.
    pub fn marginals_along(&self, order: &[usize]) -> Vec<f64> {
        let mut prop = Propagator::new(self.ldag.len());
        let mut out = vec![0.0; self.ldag.len()];
        for &v in order {
            out[v] = prop.add_seed(self.ldag, v);
        }
        out
    }
}

/// Incremental activation state: adding a seed pushes the change in its
/// activation probability forward through the unseeded descendants.
struct Propagator {
    ap: Vec<f64>,
    seeded: Vec<bool>,
    delta: Vec<f64>,
    queued: Vec<bool>,
    queue: BinaryHeap<Reverse<usize>>,
}

impl Propagator {
    fn new(p: usize) -> Self {
        Propagator {
            ap: vec![0.0; p],
            seeded: vec![false; p],
            delta: vec![0.0; p],
            queued: vec![false; p],
            queue: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        self.ap.fill(0.0);
        self.seeded.fill(false);
    }

    /// Seeds local player `v`; returns the increase of the root's
    /// activation probability.
    fn add_seed(&mut self, d: &Ldag, v: usize) -> f64 {
        if self.seeded[v] {
            return 0.0;
        }
        let root = d.root_position();
        let lift = 1.0 - self.ap[v];
        self.ap[v] = 1.0;
        self.seeded[v] = true;
        if v == root {
            return lift;
        }
        if lift == 0.0 {
            return 0.0;
        }
        self.spread(d, v, lift);
        let mut gain = 0.0;
        // positions pop in increasing order, so every in-arc contribution
        // to x has arrived before x is settled
        while let Some(Reverse(x)) = self.queue.pop() {
            let dx = std::mem::take(&mut self.delta[x]);
            self.queued[x] = false;
            if self.seeded[x] {
                continue;
            }
            self.ap[x] += dx;
            if x == root {
                gain = dx;
            } else {
                self.spread(d, x, dx);
            }
        }
        gain
    }

    fn spread(&mut self, d: &Ldag, x: usize, amount: f64) {
        for a in d.out_arcs(x) {
            self.delta[a.to] += a.weight * amount;
            if !self.queued[a.to] {
                self.queued[a.to] = true;
                self.queue.push(Reverse(a.to));
            }
        }
    }
}

fn check_budget(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::validation(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// Monte Carlo Shapley values by sampling uniform player orderings.
pub fn mc_shapley_ldag<R: Rng + ?Sized>(game: &LdagGame, permutations: usize, rng: &mut R) -> Result<PlayerScores> {
    check_budget(permutations, "permutation count")?;
    let d = game.ldag;
    let p = d.len();
    let mut prop = Propagator::new(p);
    let mut totals = vec![0.0; p];
    let mut order: Vec<usize> = (0..p).collect();
    for _ in 0..permutations {
        order.shuffle(rng);
        prop.reset();
        for &v in &order {
            totals[v] += prop.add_seed(d, v);
        }
    }
    let scale = 1.0 / permutations as f64;
    Ok(game.scores(totals.into_iter().map(|t| t * scale).collect()))
}

/// Exact Shapley value or Banzhaf index by full enumeration of `ν`.
pub fn exact_index_ldag(game: &LdagGame, kind: IndexKind) -> Result<PlayerScores> {
    let n = game.player_count();
    let limit = match kind {
        IndexKind::Shapley => MAX_SHAPLEY_PLAYERS,
        IndexKind::Banzhaf => MAX_BANZHAF_PLAYERS,
    };
    if n > limit {
        return Err(Error::TooLarge(format!("{n} players, limit {limit} for {kind}")));
    }
    let d = game.ldag;
    let mut seeded = vec![false; n];
    let mut scratch = vec![0.0; n];
    let values: Vec<f64> = (0..1usize << n)
        .map(|mask| {
            for (i, s) in seeded.iter_mut().enumerate() {
                *s = mask >> i & 1 == 1;
            }
            d.activation_local(&seeded, &mut scratch)
        })
        .collect();
    let index = match kind {
        IndexKind::Shapley => shapley_from_values(n, &values)?,
        IndexKind::Banzhaf => banzhaf_from_values(n, &values)?,
    };
    Ok(game.scores(index))
}

/// Ancestor and descendant cones of a local player, ascending positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cones {
    pub ancestors: Vec<usize>,
    pub descendants: Vec<usize>,
}

pub fn cones(d: &Ldag, v: usize) -> Cones {
    let walk = |forward: bool| {
        let mut seen = vec![false; d.len()];
        let mut stack = vec![v];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            let next: Vec<usize> = if forward {
                d.out_arcs(x).map(|a| a.to).collect()
            } else {
                d.in_arcs(x).map(|a| a.from).collect()
            };
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    };
    Cones { ancestors: walk(false), descendants: walk(true) }
}

/// Scratch buffers for the two Banzhaf factors of one target.
struct FactorEval<'a> {
    d: &'a Ldag,
    v: usize,
    cones: Cones,
    value: Vec<f64>,
    seeded: Vec<bool>,
}

impl<'a> FactorEval<'a> {
    fn new(d: &'a Ldag, v: usize) -> Self {
        FactorEval { d, v, cones: cones(d, v), value: vec![0.0; d.len()], seeded: vec![false; d.len()] }
    }

    /// `1 - ap(v)` with the ancestors flagged in `seeded` active.
    fn ancestor_factor(&mut self) -> f64 {
        for &x in &self.cones.ancestors {
            self.value[x] = if self.seeded[x] {
                1.0
            } else {
                self.d.in_arcs(x).map(|a| a.weight * self.value[a.from]).sum()
            };
        }
        let ap: f64 = self.d.in_arcs(self.v).map(|a| a.weight * self.value[a.from]).sum();
        1.0 - ap
    }

    /// Path weight from `v` to the root avoiding the descendants flagged in
    /// `seeded`: the root's response to lifting `ap(v)` from 0 to 1.
    fn descendant_factor(&mut self) -> f64 {
        let root = self.d.root_position();
        if self.v == root {
            return 1.0;
        }
        self.value[self.v] = 1.0;
        for &x in &self.cones.descendants {
            self.value[x] = if self.seeded[x] {
                0.0
            } else {
                self.d
                    .in_arcs(x)
                    .filter(|a| a.from == self.v || self.cones.descendants.binary_search(&a.from).is_ok())
                    .map(|a| a.weight * self.value[a.from])
                    .sum()
            };
        }
        self.value[root]
    }

    fn set_subset(&mut self, cone: &[usize], bits: impl Fn(usize) -> bool) {
        for (i, &x) in cone.iter().enumerate() {
            self.seeded[x] = bits(i);
        }
    }
}

/// Monte Carlo Banzhaf index of `target` in `game`, sampling the ancestor
/// and descendant factors independently with `samples` draws each. Players
/// in neither cone are never sampled.
pub fn mc_banzhaf_ldag<R: Rng + ?Sized>(game: &LdagGame, target: NodeId, samples: usize, rng: &mut R) -> Result<f64> {
    check_budget(samples, "sample count")?;
    let v = game.local(target)?;
    let mut eval = FactorEval::new(game.ldag, v);
    let ancestors = eval.cones.ancestors.clone();
    let descendants = eval.cones.descendants.clone();

    let draw = |eval: &mut FactorEval, cone: &[usize], rng: &mut R| {
        for &x in cone {
            eval.seeded[x] = rng.gen::<bool>();
        }
    };
    let mut f1 = 0.0;
    if ancestors.is_empty() {
        f1 = samples as f64;
    } else {
        for _ in 0..samples {
            draw(&mut eval, &ancestors, rng);
            f1 += eval.ancestor_factor();
        }
    }
    let mut f2 = 0.0;
    if descendants.is_empty() {
        f2 = samples as f64 * eval.descendant_factor();
    } else {
        for _ in 0..samples {
            draw(&mut eval, &descendants, rng);
            f2 += eval.descendant_factor();
        }
    }
    let n = samples as f64;
    Ok((f1 / n) * (f2 / n))
}

/// The Banzhaf decomposition with both factors averaged over every subset
/// of their cones instead of sampled.
pub fn exhaustive_banzhaf_ldag(game: &LdagGame, target: NodeId) -> Result<f64> {
    let v = game.local(target)?;
    let mut eval = FactorEval::new(game.ldag, v);
    let ancestors = eval.cones.ancestors.clone();
    let descendants = eval.cones.descendants.clone();
    for cone in [&ancestors, &descendants] {
        if cone.len() > MAX_EXHAUSTIVE_CONE {
            return Err(Error::TooLarge(format!("cone of {} players, limit {MAX_EXHAUSTIVE_CONE}", cone.len())));
        }
    }
    let mut f1 = 0.0;
    for mask in 0u64..1 << ancestors.len() {
        eval.set_subset(&ancestors, |i| mask >> i & 1 == 1);
        f1 += eval.ancestor_factor();
    }
    f1 /= (1u64 << ancestors.len()) as f64;
    let mut f2 = 0.0;
    for mask in 0u64..1 << descendants.len() {
        eval.set_subset(&descendants, |i| mask >> i & 1 == 1);
        f2 += eval.descendant_factor();
    }
    f2 /= (1u64 << descendants.len()) as f64;
    Ok(f1 * f2)
}

/// Monte Carlo Banzhaf indices of every player at once.
///
/// One forward pass over a random coalition yields the ancestor factor of
/// every player (a player's own seed flag never enters its factor), and one
/// backward pass over an independent coalition yields every descendant
/// factor. Each player's estimate has the same distribution as
/// [`mc_banzhaf_ldag`] with the same `samples`.
pub fn mc_banzhaf_all<R: Rng + ?Sized>(game: &LdagGame, samples: usize, rng: &mut R) -> Result<PlayerScores> {
    check_budget(samples, "sample count")?;
    let d = game.ldag;
    let p = d.len();
    let root = d.root_position();
    let mut seeded = vec![false; p];
    let mut unseeded_ap = vec![0.0; p];
    let mut alpha = vec![0.0; p];
    let mut f1 = vec![0.0; p];
    let mut f2 = vec![0.0; p];

    for _ in 0..samples {
        seeded.iter_mut().for_each(|s| *s = rng.gen::<bool>());
        for x in 0..p {
            unseeded_ap[x] = d
                .in_arcs(x)
                .map(|a| a.weight * if seeded[a.from] { 1.0 } else { unseeded_ap[a.from] })
                .sum();
            f1[x] += 1.0 - unseeded_ap[x];
        }
    }
    for _ in 0..samples {
        seeded.iter_mut().for_each(|s| *s = rng.gen::<bool>());
        alpha[root] = 1.0;
        f2[root] += 1.0;
        for x in (0..root).rev() {
            alpha[x] = d
                .out_arcs(x)
                .map(|a| a.weight * if seeded[a.to] { 0.0 } else { alpha[a.to] })
                .sum();
            f2[x] += alpha[x];
        }
    }
    let n = samples as f64;
    Ok(game.scores(f1.iter().zip(&f2).map(|(a, b)| (a / n) * (b / n)).collect()))
}

/// Sums per-LDAG indices into one global table.
///
/// Each node's contributions are added in a canonical (sorted) order, so
/// the result is bit-identical for any ordering of `per_ldag`.
pub fn merge_indices(per_ldag: &[PlayerScores], node_count: usize) -> Result<ScoreTable> {
    let mut entries: Vec<(NodeId, f64)> = Vec::with_capacity(per_ldag.iter().map(|t| t.nodes.len()).sum());
    for table in per_ldag {
        for (v, x) in table.iter() {
            if v >= node_count {
                return Err(Error::NodeOutOfRange { id: v, node_count });
            }
            entries.push((v, x));
        }
    }
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut scores = vec![0.0; node_count];
    for (v, x) in entries {
        scores[v] += x;
    }
    Ok(ScoreTable::new(scores))
}

/// Index table for one LDAG using the stream reserved for its root.
pub fn ldag_index(d: &Ldag, kind: IndexKind, budget: usize, base_seed: u64) -> Result<PlayerScores> {
    let game = LdagGame::new(d);
    let mut rng: Stream = rng::stream(base_seed, domain::LDAG_GAME, d.root() as u64);
    match kind {
        IndexKind::Shapley => mc_shapley_ldag(&game, budget, &mut rng),
        IndexKind::Banzhaf => mc_banzhaf_all(&game, budget, &mut rng),
    }
}

/// Index tables for many LDAGs, concurrently or serially; both give
/// identical results.
pub fn ldag_indices(
    ldags: &[Ldag],
    kind: IndexKind,
    budget: usize,
    base_seed: u64,
    parallel: bool,
) -> Result<Vec<PlayerScores>> {
    if parallel {
        ldags.par_iter().map(|d| ldag_index(d, kind, budget, base_seed)).collect()
    } else {
        ldags.iter().map(|d| ldag_index(d, kind, budget, base_seed)).collect()
    }
}

/// Merged LDAG index of every node.
pub fn ldag_index_scores(g: &Graph, theta: f64, kind: IndexKind, budget: usize, base_seed: u64) -> Result<ScoreTable> {
    let ldags = ldag::build_all(g, theta)?;
    let tables = ldag_indices(&ldags, kind, budget, base_seed, true)?;
    merge_indices(&tables, g.node_count())
}

/// Top-`k` nodes by merged LDAG Shapley value or Banzhaf index.
pub fn ldag_index_select(
    g: &Graph,
    k: usize,
    theta: f64,
    kind: IndexKind,
    budget: usize,
    base_seed: u64,
) -> Result<SeedSet> {
    crate::scores::check_budget(k, g.node_count())?;
    ldag_index_scores(g, theta, kind, budget, base_seed)?.top_k(k)
}

/// Writes `root,node,index` rows using node labels.
pub fn write_index_csv<'t, W: Write>(
    g: &Graph,
    tables: impl IntoIterator<Item = (NodeId, &'t PlayerScores)>,
    mut out: W,
) -> Result<()> {
    writeln!(out, "root,node,index")?;
    for (root, table) in tables {
        for (v, x) in table.iter() {
            writeln!(out, "{},{},{}", g.label(root), g.label(v), x)?;
        }
    }
    Ok(())
}

/// Reads `root,node,index` rows back into one table per root, in order of
/// first appearance.
pub fn read_index_csv<R: BufRead>(g: &Graph, reader: R) -> Result<Vec<(NodeId, PlayerScores)>> {
    let mut out: Vec<(NodeId, PlayerScores)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "root,node,index" {
                return Err(Error::Parse { line: 1, message: "expected header `root,node,index`".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [root, node, value] = fields[..] else {
            return Err(Error::Parse { line: i + 1, message: "expected 3 fields".into() });
        };
        let root = g.node_by_label(root)?;
        let node = g.node_by_label(node)?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::Parse { line: i + 1, message: format!("bad index `{value}`") })?;
        match out.iter_mut().find(|(r, _)| *r == root) {
            Some((_, t)) => {
                t.nodes.push(node);
                t.values.push(value);
            }
            None => out.push((root, PlayerScores { nodes: vec![node], values: vec![value] })),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldag::build_ldag;
    use crate::rng::stream;

    // v=0 -> u=1 with weight 0.8, rooted at u
    fn single_arc() -> Ldag {
        let g = Graph::from_arcs(2, &[(0, 1, 0.8)]).unwrap();
        build_ldag(&g, 1, 0.01).unwrap()
    }

    fn chain() -> Ldag {
        // y=0 -> x=1 -> v=2
        let g = Graph::from_arcs(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        build_ldag(&g, 2, 0.01).unwrap()
    }

    #[test]
    fn exact_indices_on_single_arc() {
        let d = single_arc();
        let game = LdagGame::new(&d);
        for kind in [IndexKind::Shapley, IndexKind::Banzhaf] {
            let t = exact_index_ldag(&game, kind).unwrap();
            assert!((t.get(0).unwrap() - 0.4).abs() < 1e-12, "{kind}");
            assert!((t.get(1).unwrap() - 0.6).abs() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn chain_golden_values() {
        // hand enumeration: ν({y})=.25, ν({x})=.5, ν({v})=1, ν({y,x})=.5,
        // pairs with v and the grand coalition are 1
        let d = chain();
        let game = LdagGame::new(&d);
        let sv = exact_index_ldag(&game, IndexKind::Shapley).unwrap();
        let bi = exact_index_ldag(&game, IndexKind::Banzhaf).unwrap();
        let expect_sv = [(0, 2.0 / 24.0), (1, 5.0 / 24.0), (2, 17.0 / 24.0)];
        for (v, x) in expect_sv {
            assert!((sv.get(v).unwrap() - x).abs() < 1e-12, "sv {v}");
        }
        let expect_bi = [(0, 0.0625), (1, 0.1875), (2, 0.6875)];
        for (v, x) in expect_bi {
            assert!((bi.get(v).unwrap() - x).abs() < 1e-12, "bi {v}");
        }
    }

    #[test]
    fn mc_shapley_single_arc_converges() {
        let d = single_arc();
        let t = mc_shapley_ldag(&LdagGame::new(&d), 100_000, &mut stream(1, 0, 0)).unwrap();
        assert!((t.get(0).unwrap() - 0.4).abs() < 0.01);
        assert!((t.get(1).unwrap() - 0.6).abs() < 0.01);
        assert!((t.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_member_game() {
        let g = Graph::from_arcs(1, &[]).unwrap();
        let d = build_ldag(&g, 0, 0.5).unwrap();
        let game = LdagGame::new(&d);
        assert_eq!(mc_shapley_ldag(&game, 3, &mut stream(1, 0, 0)).unwrap().values, vec![1.0]);
        assert_eq!(exact_index_ldag(&game, IndexKind::Banzhaf).unwrap().values, vec![1.0]);
        assert_eq!(mc_banzhaf_ldag(&game, 0, 5, &mut stream(1, 0, 0)).unwrap(), 1.0);
        assert_eq!(exhaustive_banzhaf_ldag(&game, 0).unwrap(), 1.0);
    }

    #[test]
    fn banzhaf_decomposition_single_arc() {
        let d = single_arc();
        let game = LdagGame::new(&d);
        assert!((exhaustive_banzhaf_ldag(&game, 0).unwrap() - 0.4).abs() < 1e-12);
        assert!((exhaustive_banzhaf_ldag(&game, 1).unwrap() - 0.6).abs() < 1e-12);
        let c = cones(&d, d.position(0).unwrap());
        assert!(c.ancestors.is_empty());
        assert_eq!(c.descendants, vec![d.position(1).unwrap()]);
    }

    #[test]
    fn root_banzhaf_only_has_ancestor_factor() {
        let d = chain();
        let game = LdagGame::new(&d);
        let c = cones(&d, d.root_position());
        assert!(c.descendants.is_empty());
        assert_eq!(c.ancestors.len(), 2);
        assert!((exhaustive_banzhaf_ldag(&game, 2).unwrap() - 0.6875).abs() < 1e-12);
    }

    #[test]
    fn mc_banzhaf_rejects_non_players() {
        let d = single_arc();
        let game = LdagGame::new(&d);
        assert!(mc_banzhaf_ldag(&game, 5, 10, &mut stream(1, 0, 0)).is_err());
        assert!(mc_banzhaf_ldag(&game, 0, 0, &mut stream(1, 0, 0)).is_err());
    }

    #[test]
    fn mc_banzhaf_converges_on_chain() {
        let d = chain();
        let game = LdagGame::new(&d);
        let exact = exact_index_ldag(&game, IndexKind::Banzhaf).unwrap();
        let all = mc_banzhaf_all(&game, 50_000, &mut stream(2, 0, 0)).unwrap();
        for v in 0..3 {
            let one = mc_banzhaf_ldag(&game, v, 50_000, &mut stream(3, 0, v as u64)).unwrap();
            assert!((one - exact.get(v).unwrap()).abs() < 0.01);
            assert!((all.get(v).unwrap() - exact.get(v).unwrap()).abs() < 0.01);
        }
    }

    #[test]
    fn merge_examples() {
        let a = PlayerScores { nodes: vec![0, 1], values: vec![0.4, 0.6] };
        let b = PlayerScores { nodes: vec![0, 2], values: vec![0.3, 0.7] };
        let m = merge_indices(&[a.clone(), b.clone()], 4).unwrap();
        assert!((m.get(0) - 0.7).abs() < 1e-15);
        assert_eq!(m.get(3), 0.0);
        assert_eq!(merge_indices(&[], 3).unwrap().as_slice(), &[0.0; 3]);
        assert_eq!(m, merge_indices(&[b, a], 4).unwrap());
    }

    #[test]
    fn index_csv_round_trip() {
        let g = Graph::from_arcs(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let ldags = ldag::build_all(&g, 0.01).unwrap();
        let tables = ldag_indices(&ldags, IndexKind::Shapley, 20, 4, false).unwrap();
        let mut buf = Vec::new();
        write_index_csv(&g, ldags.iter().map(|d| d.root()).zip(&tables), &mut buf).unwrap();
        let back = read_index_csv(&g, buf.as_slice()).unwrap();
        let back_tables: Vec<PlayerScores> = back.into_iter().map(|(_, t)| t).collect();
        assert_eq!(back_tables, tables);
    }
}
