//! Benchmark runner: select seed sets of several sizes with each algorithm
//! and score them by Monte Carlo spread.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use log::info;

use crate::baselines;
use crate::diffusion::{self, DiffusionModel};
use crate::error::{Error, Result};
use crate::games::{self, IndexKind};
use crate::graph::{self, Directedness, Graph, WeightScheme};
use crate::ldag::DEFAULT_THETA;
use crate::scores::SeedSet;
use crate::shapley::{self, DiscountRule};

pub const CSV_HEADER: &str = "algo,k,spread_mean,spread_stddev,select_ms,eval_runs,rng_seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dsv,
    /// DSV with the re-applied neighbour discount.
    DsvLiteral,
    SvFringe,
    SvSurrounding,
    LdagShapley,
    LdagBanzhaf,
    GreedyLdag,
    Celf,
    DegreeDiscount,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Dsv,
        Algorithm::DsvLiteral,
        Algorithm::SvFringe,
        Algorithm::SvSurrounding,
        Algorithm::LdagShapley,
        Algorithm::LdagBanzhaf,
        Algorithm::GreedyLdag,
        Algorithm::Celf,
        Algorithm::DegreeDiscount,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Dsv => "dsv",
            Algorithm::DsvLiteral => "dsv-literal",
            Algorithm::SvFringe => "sv-fringe",
            Algorithm::SvSurrounding => "sv-surrounding",
            Algorithm::LdagShapley => "ldag-sv",
            Algorithm::LdagBanzhaf => "ldag-bi",
            Algorithm::GreedyLdag => "greedy-ldag",
            Algorithm::Celf => "celf",
            Algorithm::DegreeDiscount => "degree-discount",
        }
    }

    /// Algorithms that build LDAGs and need LT weights.
    pub fn requires_lt_weights(&self) -> bool {
        matches!(self, Algorithm::LdagShapley | Algorithm::LdagBanzhaf | Algorithm::GreedyLdag)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tunables shared by the selection algorithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectionParams {
    pub model: DiffusionModel,
    pub theta: f64,
    /// Permutations (Shapley) or samples (Banzhaf) per LDAG game.
    pub ldag_budget: usize,
    pub dd_p: f64,
    pub celf_runs: usize,
    pub rng_seed: u64,
}

impl Default for SelectionParams {
    fn default() -> Self {
        SelectionParams {
            model: DiffusionModel::Lt,
            theta: DEFAULT_THETA,
            ldag_budget: games::DEFAULT_BUDGET,
            dd_p: 0.01,
            celf_runs: 200,
            rng_seed: 0,
        }
    }
}

pub fn select_seeds(g: &Graph, algo: Algorithm, k: usize, params: &SelectionParams) -> Result<SeedSet> {
    match algo {
        Algorithm::Dsv => shapley::dsv_select(g, k),
        Algorithm::DsvLiteral => shapley::dsv_select_with(g, k, DiscountRule::Literal),
        Algorithm::SvFringe => shapley::fringe_shapley(g).top_k(k),
        Algorithm::SvSurrounding => shapley::surrounding_shapley(g).top_k(k),
        Algorithm::LdagShapley | Algorithm::LdagBanzhaf => {
            let kind = if algo == Algorithm::LdagShapley { IndexKind::Shapley } else { IndexKind::Banzhaf };
            games::ldag_index_select(g, k, params.theta, kind, params.ldag_budget, params.rng_seed)
        }
        Algorithm::GreedyLdag => baselines::greedy_ldag_select(g, k, params.theta),
        Algorithm::Celf => baselines::lazy_greedy_select(g, params.model, k, params.celf_runs, params.rng_seed),
        Algorithm::DegreeDiscount => baselines::degree_discount_select(g, params.dd_p, k),
    }
}

/// Seed-set sizes: explicit values or a percent-of-n range.
#[derive(Clone, Debug, PartialEq)]
pub enum KSpec {
    Values(Vec<usize>),
    Percent { from: f64, to: f64, step: f64 },
}

impl KSpec {
    /// Concrete sizes for a graph of `n` nodes. Percentages are rounded to
    /// the nearest integer and clamped to `1..=n`; repeated sizes collapse.
    pub fn expand(&self, n: usize) -> Result<Vec<usize>> {
        let mut ks = match self {
            KSpec::Values(v) => {
                if let Some(&k) = v.iter().find(|&&k| k == 0 || k > n) {
                    return Err(Error::Config(format!("k={k} outside 1..={n}")));
                }
                v.clone()
            }
            &KSpec::Percent { from, to, step } => {
                if !(from > 0.0 && to <= 100.0 && from <= to && step > 0.0) {
                    return Err(Error::Config(format!("bad k-percent range {from}:{to}:{step}")));
                }
                let mut out = Vec::new();
                let mut i = 0;
                loop {
                    let pct = from + step * i as f64;
                    if pct > to + 1e-9 {
                        break;
                    }
                    out.push(((pct * n as f64 / 100.0).round() as usize).clamp(1, n));
                    i += 1;
                }
                out
            }
        };
        ks.dedup();
        Ok(ks)
    }
}

impl FromStr for KSpec {
    type Err = Error;

    /// `a,b,c` lists sizes; `from:to:step` is a percent range.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad k specification `{s}`"));
        if s.contains(':') {
            let parts: Vec<f64> = s
                .split(':')
                .map(|p| p.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            match parts[..] {
                [from, to, step] => Ok(KSpec::Percent { from, to, step }),
                [from, to] => Ok(KSpec::Percent { from, to, step: 1.0 }),
                _ => Err(bad()),
            }
        } else {
            let v = s
                .split(',')
                .map(|p| p.trim().parse().map_err(|_| bad()))
                .collect::<Result<Vec<usize>>>()?;
            Ok(KSpec::Values(v))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    pub directedness: Directedness,
    /// `None` keeps the weights read from the file.
    pub scheme: Option<WeightScheme>,
    pub algorithms: Vec<Algorithm>,
    pub k: KSpec,
    pub selection: SelectionParams,
    pub eval_runs: usize,
    pub output: Option<PathBuf>,
    /// Record selection wall time. Off by default so output is a pure
    /// function of the configuration.
    pub timing: bool,
}

/// Keys accepted in config files and as overrides.
pub const CONFIG_KEYS: &[&str] = &[
    "graph", "directedness", "scheme", "model", "algos", "k", "theta", "budget", "dd-p", "celf-runs",
    "runs", "rng-seed", "output", "timing",
];

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_settings(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key `{key}` on line {}", i + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl ExperimentConfig {
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str| settings.get(key).map(String::as_str);
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
        }
        let or_default = |key: &str, default: &str| -> String { get(key).unwrap_or(default).to_string() };

        let graph = get("graph").ok_or_else(|| Error::Config("missing `graph`".into()))?;
        let scheme = match get("scheme").unwrap_or("weighted-cascade") {
            "file" => None,
            s => Some(s.parse::<WeightScheme>().map_err(|e| Error::Config(e.to_string()))?),
        };
        let algorithms = get("algos")
            .ok_or_else(|| Error::Config("missing `algos`".into()))?
            .split(',')
            .map(|a| a.trim().parse())
            .collect::<Result<Vec<Algorithm>>>()?;
        if algorithms.is_empty() {
            return Err(Error::Config("no algorithms requested".into()));
        }
        let defaults = SelectionParams::default();
        let selection = SelectionParams {
            model: or_default("model", "lt").parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            theta: parse("theta", &or_default("theta", &defaults.theta.to_string()))?,
            ldag_budget: parse("budget", &or_default("budget", &defaults.ldag_budget.to_string()))?,
            dd_p: parse("dd-p", &or_default("dd-p", &defaults.dd_p.to_string()))?,
            celf_runs: parse("celf-runs", &or_default("celf-runs", &defaults.celf_runs.to_string()))?,
            rng_seed: parse("rng-seed", &or_default("rng-seed", "0"))?,
        };
        let timing = match or_default("timing", "false").as_str() {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => return Err(Error::Config(format!("bad value `{other}` for `timing`"))),
        };
        Ok(ExperimentConfig {
            graph: PathBuf::from(graph),
            directedness: or_default("directedness", "directed")
                .parse()
                .map_err(|e: Error| Error::Config(e.to_string()))?,
            scheme,
            algorithms,
            k: parse("k", &or_default("k", "2:30:4"))?,
            selection,
            eval_runs: parse("runs", &or_default("runs", "10000"))?,
            output: get("output").map(PathBuf::from),
            timing,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub spread_mean: f64,
    pub spread_stddev: f64,
    pub select_ms: f64,
    pub eval_runs: usize,
    pub rng_seed: u64,
}

/// Loads the configured graph and applies the weight scheme.
pub fn prepare_graph(config: &ExperimentConfig) -> Result<Graph> {
    let g = graph::load_edge_list(&config.graph, config.directedness)?;
    match config.scheme {
        Some(s) => g.apply_weights(s),
        None => Ok(g),
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let g = prepare_graph(config)?;
    run_on_graph(&g, config)
}

/// Runs every `(algorithm, k)` cell on an already prepared graph. Rows come
/// back in configuration order.
pub fn run_on_graph(g: &Graph, config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if config.eval_runs == 0 {
        return Err(Error::Config("`runs` must be at least 1".into()));
    }
    if !g.is_lt_weighted() {
        if let Some(a) = config.algorithms.iter().find(|a| a.requires_lt_weights()) {
            return Err(Error::Config(format!(
                "`{a}` needs LT weights (incoming sums <= 1); use weighted-cascade or lt-uniform"
            )));
        }
        if config.selection.model == DiffusionModel::Lt {
            return Err(Error::Config("the LT model needs incoming weights summing to at most 1".into()));
        }
    }
    let ks = config.k.expand(g.node_count())?;
    let mut rows = Vec::new();
    for &algorithm in &config.algorithms {
        for &k in &ks {
            let start = Instant::now();
            let seeds = select_seeds(g, algorithm, k, &config.selection)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let est = diffusion::estimate_spread(
                g,
                config.selection.model,
                seeds.as_slice(),
                config.eval_runs,
                config.selection.rng_seed,
            )?;
            info!("{algorithm} k={k}: spread {:.2} ({elapsed:.1} ms)", est.mean);
            rows.push(ResultRow {
                algorithm,
                k,
                spread_mean: est.mean,
                spread_stddev: est.stddev,
                select_ms: if config.timing { elapsed } else { 0.0 },
                eval_runs: est.runs,
                rng_seed: config.selection.rng_seed,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{:.3},{},{}",
            r.algorithm, r.k, r.spread_mean, r.spread_stddev, r.select_ms, r.eval_runs, r.rng_seed
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_range_expansion() {
        let k: KSpec = "2:30:4".parse().unwrap();
        assert_eq!(k.expand(100).unwrap(), vec![2, 6, 10, 14, 18, 22, 26, 30]);
    }

    #[test]
    fn explicit_k_values() {
        let k: KSpec = "1,2".parse().unwrap();
        assert_eq!(k.expand(10).unwrap(), vec![1, 2]);
        assert!(k.expand(1).is_err());
        assert!("0:50:1".parse::<KSpec>().unwrap().expand(10).is_err());
    }

    #[test]
    fn small_graph_percentages_clamp_to_one() {
        let k: KSpec = "2:10:4".parse().unwrap();
        assert_eq!(k.expand(10).unwrap(), vec![1]);
    }

    #[test]
    fn unknown_algorithm_is_a_config_error() {
        assert!(matches!("pagerank".parse::<Algorithm>(), Err(Error::Config(_))));
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
    }

    #[test]
    fn settings_parse_and_reject_unknown_keys() {
        let s = parse_settings("# comment\ngraph = g.txt\nalgos = dsv, degree-discount\nk = 1,2\n").unwrap();
        let c = ExperimentConfig::from_settings(&s).unwrap();
        assert_eq!(c.algorithms, vec![Algorithm::Dsv, Algorithm::DegreeDiscount]);
        assert_eq!(c.k, KSpec::Values(vec![1, 2]));
        assert_eq!(c.eval_runs, 10_000);
        assert!(!c.timing);
        assert!(parse_settings("colour = red\n").is_err());
        assert!(parse_settings("graph g.txt\n").is_err());
    }

    #[test]
    fn ldag_algorithms_need_lt_weights() {
        let g = Graph::from_arcs(3, &[(0, 2, 0.9), (1, 2, 0.9)]).unwrap();
        let mut s = parse_settings("graph = x\nalgos = ldag-sv\nk = 1\nmodel = ic\n").unwrap();
        let c = ExperimentConfig::from_settings(&s).unwrap();
        assert!(matches!(run_on_graph(&g, &c), Err(Error::Config(_))));
        s.insert("algos".into(), "dsv".into());
        let c = ExperimentConfig::from_settings(&s).unwrap();
        assert_eq!(run_on_graph(&g, &c).unwrap().len(), 1);
    }

    #[test]
    fn rows_stay_within_bounds() {
        let g = crate::synth::gnp_undirected(10, 0.3, 5)
            .unwrap()
            .apply_weights(WeightScheme::WeightedCascade)
            .unwrap();
        let s = parse_settings("graph = x\nalgos = dsv,degree-discount\nk = 1,2\nruns = 500\n").unwrap();
        let c = ExperimentConfig::from_settings(&s).unwrap();
        let rows = run_on_graph(&g, &c).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.spread_mean >= r.k as f64 && r.spread_mean <= 10.0);
        }
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with(&format!("{CSV_HEADER}\n")));
    }
}
