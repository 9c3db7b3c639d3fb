//! Shapley values of the neighbourhood games and the Discounted Shapley
//! Value seed selection.
//!
//! Both games live on the undirected projection. The fringe game pays a
//! coalition the number of nodes in it or adjacent to it; the surrounding
//! game pays only the adjacent outsiders. Their Shapley values have closed
//! forms:
//!
//! ```text
//! fringe(v)      = sum over u in {v} ∪ N(v) of 1 / (1 + deg(u))
//! surrounding(v) = fringe(v) - 1
//! ```

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scores::{by_score_then_id, check_budget, ScoreTable, SeedSet};

/// Player limit for exhaustive Shapley enumeration (`n!` orderings).
pub const MAX_SHAPLEY_PLAYERS: usize = 9;
/// Player limit for exhaustive Banzhaf enumeration (`2^n` coalitions).
pub const MAX_BANZHAF_PLAYERS: usize = 12;

/// A set of node ids, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coalition(Vec<NodeId>);

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = NodeId>) -> Self {
        let mut v: Vec<NodeId> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Coalition(v)
    }

    pub fn empty() -> Self {
        Coalition(Vec::new())
    }

    /// Members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        Coalition((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn members(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        self.0.iter().try_for_each(|&v| g.check_node(v))
    }
}

fn neighbourhood_mask(g: &Graph, c: &Coalition) -> Vec<bool> {
    let mut hit = vec![false; g.node_count()];
    for &u in c.members() {
        for &v in g.neighbors(u) {
            hit[v] = true;
        }
    }
    hit
}

/// Number of nodes outside `c` adjacent to some member of `c`.
pub fn surrounding_value(g: &Graph, c: &Coalition) -> Result<usize> {
    c.validate(g)?;
    let hit = neighbourhood_mask(g, c);
    Ok(hit.iter().enumerate().filter(|&(v, &h)| h && !c.contains(v)).count())
}

/// Size of `c` together with its neighbourhood.
pub fn fringe_value(g: &Graph, c: &Coalition) -> Result<usize> {
    c.validate(g)?;
    let mut hit = neighbourhood_mask(g, c);
    for &u in c.members() {
        hit[u] = true;
    }
    Ok(hit.iter().filter(|&&h| h).count())
}

fn inverse_degree_plus_one(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).map(|v| 1.0 / (1 + g.degree(v)) as f64).collect()
}

/// Closed-form Shapley value of the fringe game.
pub fn fringe_shapley(g: &Graph) -> ScoreTable {
    let inv = inverse_degree_plus_one(g);
    let scores = (0..g.node_count())
        .into_par_iter()
        .with_min_len(1024)
        .map(|v| inv[v] + g.neighbors(v).iter().map(|&u| inv[u]).sum::<f64>())
        .collect();
    ScoreTable::new(scores)
}

/// Closed-form Shapley value of the surrounding game.
pub fn surrounding_shapley(g: &Graph) -> ScoreTable {
    ScoreTable::new(fringe_shapley(g).into_vec().into_iter().map(|s| s - 1.0).collect())
}

/// Exact Shapley values from a characteristic function tabulated by
/// bitmask (`values[mask]`, bit `i` = player `i`), averaging marginal
/// contributions over all `n!` orderings.
pub fn shapley_from_values(n: usize, values: &[f64]) -> Result<Vec<f64>> {
    if n > MAX_SHAPLEY_PLAYERS {
        return Err(Error::TooLarge(format!("{n} players, limit {MAX_SHAPLEY_PLAYERS}")));
    }
    assert_eq!(values.len(), 1 << n);
    let mut totals = vec![0.0; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    let mut visit = |perm: &[usize]| {
        let mut mask = 0usize;
        for &p in perm {
            let next = mask | 1 << p;
            totals[p] += values[next] - values[mask];
            mask = next;
        }
        count += 1;
    };
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            perm.swap(j, i);
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(totals.into_iter().map(|t| t / count as f64).collect())
}

/// Exact Banzhaf indices from a tabulated characteristic function: the
/// average marginal contribution over all coalitions of the other players.
pub fn banzhaf_from_values(n: usize, values: &[f64]) -> Result<Vec<f64>> {
    if n > MAX_BANZHAF_PLAYERS {
        return Err(Error::TooLarge(format!("{n} players, limit {MAX_BANZHAF_PLAYERS}")));
    }
    assert_eq!(values.len(), 1 << n);
    let scale = 1.0 / (1u64 << n.saturating_sub(1)) as f64;
    Ok((0..n)
        .map(|v| {
            let bit = 1 << v;
            let total: f64 = (0..1usize << n)
                .filter(|m| m & bit == 0)
                .map(|m| values[m | bit] - values[m])
                .sum();
            total * scale
        })
        .collect())
}

/// Shapley value of an arbitrary game over the nodes of `g` by full
/// permutation enumeration.
pub fn brute_force_shapley(g: &Graph, value: impl Fn(&Coalition) -> f64) -> Result<ScoreTable> {
    let n = g.node_count();
    if n > MAX_SHAPLEY_PLAYERS {
        return Err(Error::TooLarge(format!("{n} nodes, limit {MAX_SHAPLEY_PLAYERS}")));
    }
    let values: Vec<f64> = (0..1u64 << n).map(|m| value(&Coalition::from_mask(m))).collect();
    Ok(ScoreTable::new(shapley_from_values(n, &values)?))
}

/// How the discount step treats nodes removed by a pick.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiscountRule {
    /// Every node that becomes infected, the pick included, is discounted
    /// from its neighbours' scores exactly once.
    #[default]
    NewlyInfected,
    /// Discount every neighbour of the pick, even ones removed by earlier
    /// picks, and never the pick itself.
    Literal,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    score: f64,
    node: NodeId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // max-heap order: higher score first, then lower id
    fn cmp(&self, other: &Self) -> Ordering {
        by_score_then_id(other.score, other.node, self.score, self.node)
    }
}

/// Step-by-step Discounted Shapley Value selection.
///
/// Scores start at `sum over u in N(v) of 1 / (1 + deg(u))`: the fringe
/// value without the node's own term. Each step picks the uninfected node
/// with the highest current score, infects it and its neighbours, and
/// discounts the removed nodes from their neighbours' scores. Once every
/// node is infected the remaining picks follow the initial scores.
pub struct DiscountedShapley<'g> {
    graph: &'g Graph,
    rule: DiscountRule,
    weight: Vec<f64>,
    initial: Vec<f64>,
    scores: Vec<f64>,
    infected: Vec<bool>,
    selected: Vec<bool>,
    uninfected: usize,
    picks: Vec<NodeId>,
    heap: BinaryHeap<Entry>,
    fallback: Vec<NodeId>,
    fallback_pos: usize,
}

impl<'g> DiscountedShapley<'g> {
    pub fn new(graph: &'g Graph, rule: DiscountRule) -> Self {
        let weight = inverse_degree_plus_one(graph);
        let initial: Vec<f64> = (0..graph.node_count())
            .map(|v| graph.neighbors(v).iter().map(|&u| weight[u]).sum())
            .collect();
        let heap = initial
            .iter()
            .enumerate()
            .map(|(node, &score)| Entry { score, node })
            .collect();
        let n = graph.node_count();
        DiscountedShapley {
            graph,
            rule,
            weight,
            scores: initial.clone(),
            initial,
            infected: vec![false; n],
            selected: vec![false; n],
            uninfected: n,
            picks: Vec::new(),
            heap,
            fallback: Vec::new(),
            fallback_pos: 0,
        }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn initial_scores(&self) -> &[f64] {
        &self.initial
    }

    pub fn infected(&self) -> &[bool] {
        &self.infected
    }

    pub fn picks(&self) -> &[NodeId] {
        &self.picks
    }

    fn infect(&mut self, u: NodeId) -> bool {
        if self.infected[u] {
            return false;
        }
        self.infected[u] = true;
        self.uninfected -= 1;
        true
    }

    fn discount(&mut self, u: NodeId) {
        let w = self.weight[u];
        for &i in self.graph.neighbors(u) {
            self.scores[i] -= w;
            if !self.infected[i] {
                self.heap.push(Entry { score: self.scores[i], node: i });
            }
        }
    }

    fn pop_best_uninfected(&mut self) -> NodeId {
        loop {
            let e = self.heap.pop().expect("an uninfected node has a live heap entry");
            if !self.infected[e.node] && e.score.to_bits() == self.scores[e.node].to_bits() {
                return e.node;
            }
        }
    }

    /// Makes the next pick; `None` once every node has been selected.
    pub fn step(&mut self) -> Option<NodeId> {
        if self.picks.len() == self.graph.node_count() {
            return None;
        }
        let pick = if self.uninfected > 0 {
            let top = self.pop_best_uninfected();
            self.infect(top);
            match self.rule {
                DiscountRule::NewlyInfected => {
                    let mut removed = vec![top];
                    for &u in self.graph.neighbors(top) {
                        if self.infect(u) {
                            removed.push(u);
                        }
                    }
                    for u in removed {
                        self.discount(u);
                    }
                }
                DiscountRule::Literal => {
                    for &u in self.graph.neighbors(top) {
                        self.infect(u);
                        self.discount(u);
                    }
                }
            }
            top
        } else {
            if self.fallback.is_empty() {
                let mut order: Vec<NodeId> = (0..self.initial.len()).collect();
                order.sort_by(|&a, &b| by_score_then_id(self.initial[a], a, self.initial[b], b));
                self.fallback = order;
            }
            while self.selected[self.fallback[self.fallback_pos]] {
                self.fallback_pos += 1;
            }
            self.fallback[self.fallback_pos]
        };
        self.selected[pick] = true;
        self.picks.push(pick);
        Some(pick)
    }
}

/// Discounted Shapley Value selection of `k` seeds.
pub fn dsv_select(g: &Graph, k: usize) -> Result<SeedSet> {
    dsv_select_with(g, k, DiscountRule::NewlyInfected)
}

pub fn dsv_select_with(g: &Graph, k: usize, rule: DiscountRule) -> Result<SeedSet> {
    check_budget(k, g.node_count())?;
    let mut dsv = DiscountedShapley::new(g, rule);
    for _ in 0..k {
        dsv.step();
    }
    Ok(SeedSet::from_vec_unchecked(dsv.picks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, Directedness};

    fn star() -> Graph {
        Graph::from_undirected_edges(4, &[(0, 1), (0, 2), (0, 3)], 1.0).unwrap()
    }

    fn labelled_path() -> Graph {
        parse_edge_list("1 2\n2 3\n".as_bytes(), Directedness::Undirected).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn surrounding_value_examples() {
        let g = star();
        assert_eq!(surrounding_value(&g, &Coalition::empty()).unwrap(), 0);
        assert_eq!(surrounding_value(&g, &Coalition::new([0])).unwrap(), 3);
        assert_eq!(surrounding_value(&g, &Coalition::new(0..4)).unwrap(), 0);
        assert!(surrounding_value(&g, &Coalition::new([7])).is_err());
    }

    #[test]
    fn fringe_closed_form_examples() {
        let s = fringe_shapley(&star());
        assert!(close(s.get(0), 1.75));
        for leaf in 1..4 {
            assert!(close(s.get(leaf), 0.75));
        }
        let iso = Graph::from_arcs(1, &[]).unwrap();
        assert_eq!(fringe_shapley(&iso).get(0), 1.0);
        let p = fringe_shapley(&labelled_path());
        assert!(close(p.get(0), 0.5 + 1.0 / 3.0));
        assert!(close(p.get(1), 1.0 / 3.0 + 1.0));
        assert!(close(p.get(2), 0.5 + 1.0 / 3.0));
    }

    #[test]
    fn surrounding_closed_form_examples() {
        let s = surrounding_shapley(&star());
        assert!(close(s.get(0), 0.75));
        assert!(close(s.get(1), -0.25));
        let iso = Graph::from_arcs(1, &[]).unwrap();
        assert_eq!(surrounding_shapley(&iso).get(0), 0.0);
        assert!(s.sum().abs() < 1e-12);
    }

    #[test]
    fn brute_force_examples() {
        let edge = Graph::from_undirected_edges(2, &[(0, 1)], 1.0).unwrap();
        let sv = brute_force_shapley(&edge, |c| fringe_value(&edge, c).unwrap() as f64).unwrap();
        assert_eq!(sv.as_slice(), &[1.0, 1.0]);
        let g = star();
        assert_eq!(brute_force_shapley(&g, |_| 0.0).unwrap().as_slice(), &[0.0; 4]);
        let sv = brute_force_shapley(&g, |c| c.len() as f64).unwrap();
        assert!(sv.as_slice().iter().all(|&x| close(x, 1.0)));
    }

    #[test]
    fn brute_force_refuses_large_graphs() {
        let g = Graph::from_arcs(10, &[]).unwrap();
        assert!(matches!(brute_force_shapley(&g, |_| 0.0), Err(Error::TooLarge(_))));
        assert!(shapley_from_values(10, &vec![0.0; 1 << 10]).is_err());
        assert!(banzhaf_from_values(13, &vec![0.0; 1 << 13]).is_err());
    }

    #[test]
    fn banzhaf_of_additive_game() {
        // v(C) = sum of member weights -> BI = own weight
        let w = [0.5, 1.5, 2.0];
        let values: Vec<f64> = (0..8usize)
            .map(|m| (0..3).filter(|i| m >> i & 1 == 1).map(|i| w[i]).sum())
            .collect();
        let bi = banzhaf_from_values(3, &values).unwrap();
        assert!(bi.iter().zip(w).all(|(a, b)| close(*a, b)));
    }

    #[test]
    fn dsv_path_traces() {
        let g = labelled_path();
        let mut dsv = DiscountedShapley::new(&g, DiscountRule::NewlyInfected);
        assert!(close(dsv.initial_scores()[0], 1.0 / 3.0));
        assert!(close(dsv.initial_scores()[1], 1.0));
        assert!(close(dsv.initial_scores()[2], 1.0 / 3.0));
        assert_eq!(dsv.step(), Some(1));
        assert!(dsv.infected().iter().all(|&i| i));

        let one: Vec<&str> = dsv_select(&g, 1).unwrap().as_slice().iter().map(|&v| g.label(v)).collect();
        assert_eq!(one, ["2"]);
        let two: Vec<&str> = dsv_select(&g, 2).unwrap().as_slice().iter().map(|&v| g.label(v)).collect();
        assert_eq!(two, ["2", "1"]);
    }

    #[test]
    fn dsv_star_trace() {
        // center first, then leaves by initial score 1/4 each, lowest id
        let s = dsv_select(&star(), 3).unwrap();
        assert_eq!(s.as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn dsv_exhausts_all_nodes() {
        let g = Graph::from_undirected_edges(6, &[(0, 1), (1, 2), (3, 4)], 1.0).unwrap();
        let mut s = dsv_select(&g, 6).unwrap().into_vec();
        s.sort_unstable();
        assert_eq!(s, (0..6).collect::<Vec<_>>());
        assert!(dsv_select(&g, 0).is_err());
        assert!(dsv_select(&g, 7).is_err());
    }

    #[test]
    fn dsv_discount_spreads_picks_apart() {
        // two disjoint stars joined by a bridge; the second pick must land in
        // the other star rather than next to the first hub
        let edges = [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (5, 6), (5, 7), (5, 8)];
        let g = Graph::from_undirected_edges(9, &edges, 1.0).unwrap();
        let s = dsv_select(&g, 2).unwrap();
        assert_eq!(s.as_slice(), &[0, 5]);
    }

    #[test]
    fn literal_rule_double_discounts_overlaps() {
        // 0-1, 1-2, 2-3, 3-4: picking 1 infects 0,1,2; a later pick of 3
        // re-discounts 2 under the literal rule only
        let g = Graph::from_undirected_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], 1.0).unwrap();
        let mut guarded = DiscountedShapley::new(&g, DiscountRule::NewlyInfected);
        let mut literal = DiscountedShapley::new(&g, DiscountRule::Literal);
        for _ in 0..2 {
            guarded.step();
            literal.step();
        }
        assert_eq!(guarded.picks(), literal.picks());
        assert!(literal.scores()[3] < guarded.scores()[3]);
    }
}
