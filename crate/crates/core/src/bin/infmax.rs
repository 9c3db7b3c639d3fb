use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use infmax::diffusion::{self, DiffusionModel};
use infmax::experiment::{self, Algorithm, ExperimentConfig, SelectionParams};
use infmax::games::{self, IndexKind};
use infmax::graph::{self, Directedness, Graph, WeightScheme};
use infmax::ldag::{self, DEFAULT_THETA};
use infmax::synth::{self, PowerLawParams};
use infmax::{Error, Result};

/// Influence maximization with Shapley-value centralities.
#[derive(Parser)]
#[command(name = "infmax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select seed nodes and print their labels, one per line.
    SeedSelect(SeedSelectArgs),
    /// Estimate the expected spread of a seed set by Monte Carlo simulation.
    Evaluate(EvaluateArgs),
    /// Run every (algorithm, k) cell of an experiment and write results CSV.
    Experiment(ExperimentArgs),
    /// Dump one LDAG as an edge list, or every LDAG's power indices as CSV.
    LdagDump(LdagDumpArgs),
    /// Write a synthetic power-law digraph as an edge list.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file: `SRC TGT [W]` per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Treat each line as an undirected edge.
    #[arg(long)]
    undirected: bool,
    /// uniform-ic:P, weighted-cascade, lt-uniform, or `file` to keep file weights.
    #[arg(long, default_value = "weighted-cascade")]
    scheme: String,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        let d = if self.undirected { Directedness::Undirected } else { Directedness::Directed };
        let g = graph::load_edge_list(&self.graph, d)?;
        match self.scheme.as_str() {
            "file" => Ok(g),
            s => g.apply_weights(s.parse::<WeightScheme>()?),
        }
    }
}

#[derive(Args)]
struct SeedSelectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// dsv, dsv-literal, sv-fringe, sv-surrounding, ldag-sv, ldag-bi,
    /// greedy-ldag, celf, degree-discount
    #[arg(long)]
    algo: String,
    /// Number of seeds.
    #[arg(long)]
    k: usize,
    /// Diffusion model used by celf.
    #[arg(long, default_value = "lt")]
    model: String,
    /// LDAG influence threshold.
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    /// Permutations or samples per LDAG game.
    #[arg(long, default_value_t = games::DEFAULT_BUDGET)]
    budget: usize,
    /// Degree discount propagation probability.
    #[arg(long, default_value_t = 0.01)]
    dd_p: f64,
    /// Monte Carlo runs per celf spread evaluation.
    #[arg(long, default_value_t = 200)]
    celf_runs: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// ic or lt.
    #[arg(long, default_value = "lt")]
    model: String,
    /// File with one seed label per line.
    #[arg(long)]
    seeds: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    /// directed or undirected.
    #[arg(long)]
    directedness: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated algorithm names.
    #[arg(long)]
    algos: Option<String>,
    /// Sizes `a,b,c` or percent range `from:to:step`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    dd_p: Option<String>,
    #[arg(long)]
    celf_runs: Option<String>,
    /// Monte Carlo runs per spread evaluation.
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    rng_seed: Option<String>,
    /// Results CSV path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record selection wall time in `select_ms` (otherwise 0).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct LdagDumpArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Root label of the LDAG to dump.
    #[arg(long, required_unless_present = "indices")]
    root: Option<String>,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    /// Write `root,node,index` rows for every LDAG to this file instead.
    #[arg(long)]
    indices: Option<PathBuf>,
    /// shapley or banzhaf.
    #[arg(long, default_value = "shapley")]
    index: String,
    #[arg(long, default_value_t = games::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Edge-list output path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 2000)]
    nodes: usize,
    /// Out-degree power-law exponent.
    #[arg(long, default_value_t = 2.3)]
    exponent: f64,
    #[arg(long, default_value_t = 2)]
    min_out: usize,
    #[arg(long, default_value_t = 200)]
    max_out: usize,
    /// Share of targets drawn by in-degree rather than uniformly.
    #[arg(long, default_value_t = 0.5)]
    attachment: f64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Edge-list output path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_seeds(g: &Graph, path: &Path) -> Result<Vec<usize>> {
    fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| g.node_by_label(l))
        .collect()
}

fn seed_select(args: &SeedSelectArgs) -> Result<()> {
    let g = args.graph.load()?;
    let algo: Algorithm = args.algo.parse()?;
    let params = SelectionParams {
        model: args.model.parse()?,
        theta: args.theta,
        ldag_budget: args.budget,
        dd_p: args.dd_p,
        celf_runs: args.celf_runs,
        rng_seed: args.rng_seed,
    };
    let seeds = experiment::select_seeds(&g, algo, args.k, &params)?;
    let mut out = open_output(None)?;
    for &v in seeds.as_slice() {
        writeln!(out, "{}", g.label(v))?;
    }
    out.flush()?;
    Ok(())
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let g = args.graph.load()?;
    let model: DiffusionModel = args.model.parse()?;
    let seeds = read_seeds(&g, &args.seeds)?;
    let est = diffusion::estimate_spread(&g, model, &seeds, args.runs, args.rng_seed)?;
    let mut out = open_output(None)?;
    writeln!(out, "mean {:.6}", est.mean)?;
    writeln!(out, "stddev {:.6}", est.stddev)?;
    writeln!(out, "runs {}", est.runs)?;
    out.flush()?;
    Ok(())
}

fn run_experiment(args: &ExperimentArgs) -> Result<()> {
    let mut settings = match &args.config {
        Some(path) => experiment::parse_settings(&fs::read_to_string(path)?)?,
        None => Default::default(),
    };
    let overrides = [
        ("graph", args.graph.as_ref().map(|p| p.display().to_string())),
        ("directedness", args.directedness.clone()),
        ("scheme", args.scheme.clone()),
        ("model", args.model.clone()),
        ("algos", args.algos.clone()),
        ("k", args.k.clone()),
        ("theta", args.theta.clone()),
        ("budget", args.budget.clone()),
        ("dd-p", args.dd_p.clone()),
        ("celf-runs", args.celf_runs.clone()),
        ("runs", args.runs.clone()),
        ("rng-seed", args.rng_seed.clone()),
        ("output", args.output.as_ref().map(|p| p.display().to_string())),
        ("timing", args.timing.then(|| "true".to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            settings.insert(key.to_string(), v);
        }
    }
    let config = ExperimentConfig::from_settings(&settings)?;
    let rows = experiment::run_experiment(&config)?;
    let mut out = open_output(config.output.as_deref())?;
    experiment::write_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn ldag_dump(args: &LdagDumpArgs) -> Result<()> {
    let g = args.graph.load()?;
    if let Some(path) = &args.indices {
        let kind: IndexKind = args.index.parse()?;
        let ldags = ldag::build_all(&g, args.theta)?;
        let tables = games::ldag_indices(&ldags, kind, args.budget, args.rng_seed, true)?;
        let mut out = open_output(Some(path))?;
        games::write_index_csv(&g, ldags.iter().map(|d| d.root()).zip(&tables), &mut out)?;
        out.flush()?;
        return Ok(());
    }
    let label = args.root.as_deref().ok_or_else(|| Error::Config("--root is required".into()))?;
    let d = ldag::build_ldag(&g, g.node_by_label(label)?, args.theta)?;
    let mut out = open_output(args.output.as_deref())?;
    d.write_edge_list(&g, &mut out)?;
    out.flush()?;
    Ok(())
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let params = PowerLawParams {
        nodes: args.nodes,
        exponent: args.exponent,
        min_out: args.min_out,
        max_out: args.max_out,
        attachment: args.attachment,
    };
    let g = synth::power_law_digraph(params, args.rng_seed)?;
    let mut out = open_output(args.output.as_deref())?;
    g.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SeedSelect(a) => seed_select(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Experiment(a) => run_experiment(a),
        Command::LdagDump(a) => ldag_dump(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
