//! Immutable weighted digraph with an undirected projection.
//!
//! Arcs are stored sorted by `(source, target)` so the out-adjacency is a
//! CSR slice; in-adjacency and the undirected projection are index arrays
//! built once at construction.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Slack allowed on the LT incoming-weight bound.
pub const LT_WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Directedness {
    Directed,
    /// Every input edge materializes as two opposite arcs.
    Undirected,
}

impl FromStr for Directedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directed" => Ok(Directedness::Directed),
            "undirected" => Ok(Directedness::Undirected),
            other => Err(Error::validation(format!("unknown directedness `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightScheme {
    /// Every arc gets the same IC probability.
    UniformIc(f64),
    /// Arc `(u, v)` gets `1 / indeg(v)`.
    WeightedCascade,
    /// Arc `(u, v)` gets `1 / indeg(v)`; the LT reading of the same numbers.
    LtUniform,
}

impl WeightScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightScheme::UniformIc(p) if !(p > 0.0 && p <= 1.0) => Err(Error::validation(
                format!("uniform-ic probability must lie in (0, 1], got {p}"),
            )),
            _ => Ok(()),
        }
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let scheme = match s.split_once(':') {
            Some(("uniform-ic", p)) => {
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::validation(format!("bad uniform-ic probability `{p}`")))?;
                WeightScheme::UniformIc(p)
            }
            None if s == "weighted-cascade" => WeightScheme::WeightedCascade,
            None if s == "lt-uniform" => WeightScheme::LtUniform,
            _ => return Err(Error::validation(format!("unknown weight scheme `{s}`"))),
        };
        scheme.validate()?;
        Ok(scheme)
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::UniformIc(p) => write!(f, "uniform-ic:{p}"),
            WeightScheme::WeightedCascade => f.write_str("weighted-cascade"),
            WeightScheme::LtUniform => f.write_str("lt-uniform"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    directedness: Directedness,
    arcs: Vec<Arc>,
    out_offsets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_arcs: Vec<usize>,
    und_offsets: Vec<usize>,
    und_neighbors: Vec<NodeId>,
    max_in_weight: f64,
}

impl Graph {
    /// Builds a graph from labelled nodes and explicit arcs.
    ///
    /// `directedness` is recorded as metadata only; undirected inputs must
    /// already contain both arc directions.
    pub fn new(labels: Vec<String>, mut arcs: Vec<Arc>, directedness: Directedness) -> Result<Self> {
        let n = labels.len();
        let mut label_index = HashMap::with_capacity(n);
        for (id, label) in labels.iter().enumerate() {
            if label_index.insert(label.clone(), id).is_some() {
                return Err(Error::validation(format!("duplicate node label `{label}`")));
            }
        }
        for arc in &arcs {
            for id in [arc.source, arc.target] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, node_count: n });
                }
            }
            if arc.source == arc.target {
                return Err(Error::validation(format!("self-loop on node `{}`", labels[arc.source])));
            }
            check_weight(arc.weight)?;
        }
        arcs.sort_by_key(|a| (a.source, a.target));
        if let Some(w) = arcs.windows(2).find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target)) {
            return Err(Error::validation(format!(
                "duplicate edge `{}` -> `{}`",
                labels[w[0].source], labels[w[0].target]
            )));
        }

        let out_offsets = offsets(n, arcs.iter().map(|a| a.source));
        let mut in_arcs: Vec<usize> = (0..arcs.len()).collect();
        in_arcs.sort_by_key(|&i| (arcs[i].target, arcs[i].source));
        let in_offsets = offsets(n, arcs.iter().map(|a| a.target));

        let mut pairs: Vec<(NodeId, NodeId)> = arcs
            .iter()
            .flat_map(|a| [(a.source, a.target), (a.target, a.source)])
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let und_offsets = offsets(n, pairs.iter().map(|p| p.0));
        let und_neighbors = pairs.into_iter().map(|p| p.1).collect();

        let mut in_sums = vec![0.0; n];
        for a in &arcs {
            in_sums[a.target] += a.weight;
        }
        let max_in_weight = in_sums.into_iter().fold(0.0, f64::max);

        Ok(Graph {
            labels,
            label_index,
            directedness,
            arcs,
            out_offsets,
            in_offsets,
            in_arcs,
            und_offsets,
            und_neighbors,
            max_in_weight,
        })
    }

    /// Directed graph on `0..node_count` labelled by decimal ids.
    pub fn from_arcs(node_count: usize, arcs: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let arcs = arcs
            .iter()
            .map(|&(source, target, weight)| Arc { source, target, weight })
            .collect();
        Graph::new(numeric_labels(node_count), arcs, Directedness::Directed)
    }

    /// Undirected graph on `0..node_count`, every edge carrying `weight` in
    /// both directions.
    pub fn from_undirected_edges(node_count: usize, edges: &[(NodeId, NodeId)], weight: f64) -> Result<Self> {
        let arcs = edges
            .iter()
            .flat_map(|&(u, v)| {
                [
                    Arc { source: u, target: v, weight },
                    Arc { source: v, target: u, weight },
                ]
            })
            .collect();
        Graph::new(numeric_labels(node_count), arcs, Directedness::Undirected)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    /// All arcs, sorted by `(source, target)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_arcs(&self, v: NodeId) -> &[Arc] {
        &self.arcs[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_arcs(&self, v: NodeId) -> impl Iterator<Item = &Arc> + '_ {
        self.in_arcs[self.in_offsets[v]..self.in_offsets[v + 1]]
            .iter()
            .map(move |&i| &self.arcs[i])
    }

    /// Indices into [`Graph::arcs`] of the out-arcs of `v`.
    pub fn out_arc_ids(&self, v: NodeId) -> std::ops::Range<usize> {
        self.out_offsets[v]..self.out_offsets[v + 1]
    }

    /// Indices into [`Graph::arcs`] of the in-arcs of `v`, by source.
    pub fn in_arc_ids(&self, v: NodeId) -> &[usize] {
        &self.in_arcs[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    /// Distinct neighbours of `v` in the undirected projection, ascending.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.und_neighbors[self.und_offsets[v]..self.und_offsets[v + 1]]
    }

    /// Degree in the undirected projection. Panics on an invalid id.
    pub fn degree(&self, v: NodeId) -> usize {
        self.und_offsets[v + 1] - self.und_offsets[v]
    }

    pub fn undirected_degree(&self, v: NodeId) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.degree(v))
    }

    /// Number of edges of the undirected projection.
    pub fn undirected_edge_count(&self) -> usize {
        self.und_neighbors.len() / 2
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { id: v, node_count: self.node_count() })
        }
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Result<NodeId> {
        self.label_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Largest total incoming weight over all nodes.
    pub fn max_in_weight(&self) -> f64 {
        self.max_in_weight
    }

    /// Whether incoming weights satisfy the LT bound `sum <= 1`.
    pub fn is_lt_weighted(&self) -> bool {
        self.max_in_weight <= 1.0 + LT_WEIGHT_TOLERANCE
    }

    pub fn require_lt_weights(&self) -> Result<()> {
        if self.is_lt_weighted() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "linear threshold requires incoming weights summing to at most 1, found {}",
                self.max_in_weight
            )))
        }
    }

    /// Returns a copy with every arc reweighted by `scheme`.
    pub fn apply_weights(&self, scheme: WeightScheme) -> Result<Graph> {
        scheme.validate()?;
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                let weight = match scheme {
                    WeightScheme::UniformIc(p) => p,
                    WeightScheme::WeightedCascade | WeightScheme::LtUniform => {
                        1.0 / self.in_degree(a.target) as f64
                    }
                };
                Arc { weight, ..*a }
            })
            .collect();
        Graph::new(self.labels.clone(), arcs, self.directedness)
    }

    /// Writes every arc as `SRC TGT W` using the original labels.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for a in &self.arcs {
            writeln!(out, "{} {} {}", self.labels[a.source], self.labels[a.target], a.weight)?;
        }
        Ok(())
    }
}

fn check_weight(w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::validation(format!("edge weight {w} outside [0, 1]")))
    }
}

fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn offsets(n: usize, keys: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut offsets = vec![0usize; n + 1];
    for k in keys {
        offsets[k + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

/// Reads an edge list from a file. See [`parse_edge_list`].
pub fn load_edge_list(path: impl AsRef<Path>, directedness: Directedness) -> Result<Graph> {
    let file = File::open(path)?;
    parse_edge_list(BufReader::new(file), directedness)
}

/// Parses `SRC TGT [W]` lines. `#` lines and blank lines are skipped; a
/// missing weight defaults to 1. Labels are mapped to dense ids in order of
/// first appearance.
pub fn parse_edge_list<R: BufRead>(reader: R, directedness: Directedness) -> Result<Graph> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut arcs = Vec::new();
    let mut seen = HashMap::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        let (src, tgt, weight) = match tokens.as_slice() {
            [s, t] => (*s, *t, 1.0),
            [s, t, w] => {
                let w: f64 = w.parse().map_err(|_| parse_err(format!("bad weight `{w}`")))?;
                (*s, *t, w)
            }
            _ => return Err(parse_err(format!("expected 2 or 3 fields, found {}", tokens.len()))),
        };
        if src == tgt {
            return Err(Error::validation(format!("line {line_no}: self-loop on node `{src}`")));
        }
        check_weight(weight).map_err(|e| Error::validation(format!("line {line_no}: {e}")))?;

        let mut intern = |label: &str| -> NodeId {
            *ids.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (intern(src), intern(tgt));
        let mut push = |source: NodeId, target: NodeId| -> Result<()> {
            if let Some(prev) = seen.insert((source, target), line_no) {
                return Err(Error::validation(format!(
                    "line {line_no}: duplicate edge `{src}` - `{tgt}` (first seen on line {prev})"
                )));
            }
            arcs.push(Arc { source, target, weight });
            Ok(())
        };
        push(u, v)?;
        if directedness == Directedness::Undirected {
            push(v, u)?;
        }
    }
    Graph::new(labels, arcs, directedness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, d: Directedness) -> Result<Graph> {
        parse_edge_list(text.as_bytes(), d)
    }

    #[test]
    fn undirected_file_materializes_both_directions() {
        let g = parse("0 1\n1 2\n", Directedness::Undirected).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.arc_count(), 4);
    }

    #[test]
    fn directed_weighted_line() {
        let g = parse("0 1 0.5\n", Directedness::Directed).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arcs(), &[Arc { source: 0, target: 1, weight: 0.5 }]);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = parse("# header\n\n  a b\n# x y\nb c 0.25\n", Directedness::Directed).unwrap();
        assert_eq!(g.labels(), &["a", "b", "c"]);
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn self_loop_is_rejected() {
        assert!(matches!(parse("0 0\n", Directedness::Directed), Err(Error::Validation(_))));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse("0 1\n0 1 2 3\n", Directedness::Directed).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse("0 1 heavy\n", Directedness::Directed).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn out_of_range_weight_is_rejected() {
        assert!(matches!(parse("0 1 1.5\n", Directedness::Directed), Err(Error::Validation(_))));
        assert!(matches!(parse("0 1 -0.1\n", Directedness::Directed), Err(Error::Validation(_))));
        assert!(matches!(parse("0 1 NaN\n", Directedness::Directed), Err(Error::Validation(_))));
    }

    #[test]
    fn duplicate_edges_are_rejected() {
        assert!(parse("0 1\n0 1\n", Directedness::Directed).is_err());
        assert!(parse("0 1\n1 0\n", Directedness::Undirected).is_err());
        assert!(parse("0 1\n1 0\n", Directedness::Directed).is_ok());
    }

    #[test]
    fn weighted_cascade_on_star() {
        let g = Graph::from_arcs(4, &[(1, 0, 1.0), (2, 0, 1.0), (3, 0, 1.0)]).unwrap();
        let g = g.apply_weights(WeightScheme::WeightedCascade).unwrap();
        assert!(g.in_arcs(0).all(|a| (a.weight - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn uniform_ic_sets_every_weight() {
        let g = Graph::from_undirected_edges(3, &[(0, 1), (1, 2)], 1.0).unwrap();
        let g = g.apply_weights(WeightScheme::UniformIc(0.1)).unwrap();
        assert!(g.arcs().iter().all(|a| a.weight == 0.1));
    }

    #[test]
    fn lt_uniform_sums_to_one() {
        let g = Graph::from_arcs(5, &[(1, 0, 1.0), (2, 0, 1.0), (3, 0, 1.0), (4, 0, 1.0)]).unwrap();
        let g = g.apply_weights(WeightScheme::LtUniform).unwrap();
        assert!(g.in_arcs(0).all(|a| a.weight == 0.25));
        assert_eq!(g.in_arcs(0).map(|a| a.weight).sum::<f64>(), 1.0);
        assert!(g.is_lt_weighted());
    }

    #[test]
    fn uniform_ic_rejects_bad_probability() {
        let g = Graph::from_arcs(2, &[(0, 1, 1.0)]).unwrap();
        assert!(g.apply_weights(WeightScheme::UniformIc(0.0)).is_err());
        assert!(g.apply_weights(WeightScheme::UniformIc(1.5)).is_err());
        assert!("uniform-ic:0".parse::<WeightScheme>().is_err());
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("uniform-ic:0.1".parse::<WeightScheme>().unwrap(), WeightScheme::UniformIc(0.1));
        assert_eq!("weighted-cascade".parse::<WeightScheme>().unwrap(), WeightScheme::WeightedCascade);
        assert_eq!("lt-uniform".parse::<WeightScheme>().unwrap(), WeightScheme::LtUniform);
        assert!("lt-uniform:3".parse::<WeightScheme>().is_err());
    }

    #[test]
    fn undirected_degree_examples() {
        let path = parse("1 2\n2 3\n", Directedness::Undirected).unwrap();
        assert_eq!(path.undirected_degree(path.node_by_label("2").unwrap()).unwrap(), 2);

        let isolated = Graph::from_arcs(3, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(isolated.undirected_degree(2).unwrap(), 0);

        let mutual = Graph::from_arcs(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(mutual.undirected_degree(0).unwrap(), 1);

        assert!(matches!(mutual.undirected_degree(2), Err(Error::NodeOutOfRange { .. })));
    }
}
