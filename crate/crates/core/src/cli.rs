//! The `gscarf` command line: `cluster`, `eval`, `gen` and `bench`.
//!
//! Exit codes: 0 success, 1 usage, 2 bad input, 3 internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{cluster_gscarf, cluster_louvain, EngineOptions, RunStats};
use crate::error::{Error, Result};
use crate::evaluation::{nmi, resolve_overlapping_truth, size_stats, NMI_FORMULA};
use crate::graph::{Graph, LabelIndex};
use crate::io;
use crate::partition::Partition;
use crate::report::Report;
use crate::synth::{gen_chung_lu, gen_planted, PlantedSpec, PowerLawSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gscarf", version, about = "Likelihood-ratio modularity clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster an edge list and write a partition file plus a report.
    Cluster(ClusterArgs),
    /// Compare a predicted partition with ground truth.
    Eval(EvalArgs),
    /// Generate a synthetic graph.
    Gen(GenArgs),
    /// Time algorithms over a series of generated graphs.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Gscarf,
    Louvain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TruthFormat {
    /// One community per line; overlaps allowed.
    Communities,
    /// `label<TAB>cluster` lines.
    Partition,
}

#[derive(Debug, Args)]
struct TruthArgs {
    /// Ground-truth file.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TruthFormat::Communities)]
    truth_format: TruthFormat,
    /// Assign nodes listed in several communities to one of them.
    #[arg(long)]
    resolve_overlap: bool,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    /// Edge list (`u v [w]` per line).
    input: PathBuf,
    /// Partition file to write.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(short, long, value_enum, default_value_t = Algorithm::Gscarf)]
    algorithm: Algorithm,
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    no_fold: bool,
    #[arg(long)]
    directed: bool,
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    truth: TruthArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Predicted partition file.
    pred: PathBuf,
    #[command(flatten)]
    truth: TruthArgs,
    /// Edge list; required with `--resolve-overlap`.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    model: GenModel,
    /// Output prefix; writes `<prefix>.edges` and, for planted graphs,
    /// `<prefix>.communities`.
    #[arg(long, global = true, default_value = "graph")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum GenModel {
    Planted(PlantedArgs),
    ChungLu(ChungLuArgs),
}

#[derive(Clone, Debug, Args)]
struct PlantedArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 10.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Debug, Args)]
struct ChungLuArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.1)]
    gamma: f64,
    #[arg(long, default_value_t = 10.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchModel {
    ChungLu,
    Planted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchAlgorithm {
    Gscarf,
    NoCache,
    NoFold,
    Louvain,
}

impl BenchAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gscarf => "gscarf",
            Self::NoCache => "no-cache",
            Self::NoFold => "no-fold",
            Self::Louvain => "louvain",
        }
    }

    pub fn run(self, g: &Graph) -> Result<(Partition, RunStats)> {
        let opts = EngineOptions::default();
        match self {
            Self::Gscarf => cluster_gscarf(g, &opts),
            Self::NoCache => cluster_gscarf(g, &opts.with_cache(false)),
            Self::NoFold => cluster_gscarf(g, &opts.with_fold(false)),
            Self::Louvain => cluster_louvain(g),
        }
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BenchModel::ChungLu)]
    model: BenchModel,
    #[arg(long, default_value_t = 2.1)]
    gamma: f64,
    #[arg(long, default_value_t = 10.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "gscarf,no-cache")]
    algorithms: Vec<BenchAlgorithm>,
    /// Runs per cell; the median wall time is reported.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// TSV output; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.into())
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Spec(_) => EXIT_USAGE,
        Error::Load { .. } | Error::Io(_) | Error::Coverage(_) => EXIT_INPUT,
        Error::Index { .. } | Error::DeadNode(_) | Error::SelfFold(_) | Error::UndefinedMetric => EXIT_INTERNAL,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Cluster(a) => cmd_cluster(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn on_off(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

fn cmd_cluster(a: ClusterArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.algorithm == Algorithm::Louvain && (a.directed || a.no_cache || a.no_fold) {
        return Err(Failure::Usage(
            "louvain takes none of --directed, --no-cache, --no-fold".into(),
        ));
    }
    let g = io::read_edge_list(&a.input, a.directed)?;
    let (name, options, (p, stats)) = match a.algorithm {
        Algorithm::Gscarf => {
            let opts = EngineOptions { use_cache: !a.no_cache, use_fold: !a.no_fold, directed: a.directed, ..Default::default() };
            let options = format!(
                "cache={},fold={},directed={}",
                on_off(opts.use_cache),
                on_off(opts.use_fold),
                on_off(opts.directed)
            );
            ("gscarf", options, cluster_gscarf(&g, &opts)?)
        }
        Algorithm::Louvain => ("louvain", "directed=off".to_string(), cluster_louvain(&g)?),
    };
    let mut report = Report::new(name, &options, &g, &p, stats)?;
    if let Some(truth) = &a.truth.truth {
        let t = load_truth(truth, &a.truth, g.labels(), Some(&g))?;
        report = report.with_nmi(nmi(&p, &t)?);
    }
    io::write_partition(io::create(&a.output)?, g.labels(), &p)?;
    emit(&report.to_string(), a.report.as_deref(), out)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_truth(path: &Path, t: &TruthArgs, universe: &LabelIndex, g: Option<&Graph>) -> Result<Partition, Failure> {
    match t.truth_format {
        TruthFormat::Partition => Ok(io::read_partition(path)?.align(universe)?),
        TruthFormat::Communities => {
            let m = io::memberships(universe, &io::read_communities(path)?)?;
            if let Some(p) = io::disjoint_partition(&m) {
                return Ok(p);
            }
            if !t.resolve_overlap {
                let label = io::first_overlap(&m, universe).unwrap_or_default();
                return Err(Error::Coverage(format!(
                    "node `{label}` is in several communities; pass --resolve-overlap"
                ))
                .into());
            }
            let g = g.ok_or_else(|| Failure::Usage("--resolve-overlap needs --graph".into()))?;
            Ok(resolve_overlapping_truth(&m, g)?)
        }
    }
}

fn cmd_eval(a: EvalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let Some(truth_path) = &a.truth.truth else {
        return Err(Failure::Usage("eval needs --truth".into()));
    };
    if a.truth.resolve_overlap && a.graph.is_none() {
        return Err(Failure::Usage("--resolve-overlap needs --graph".into()));
    }
    let pred = io::read_partition(&a.pred)?;
    let graph = a.graph.as_deref().map(|p| io::read_edge_list(p, a.directed)).transpose()?;
    let universe = match &graph {
        Some(g) => g.labels().clone(),
        None => pred.universe(),
    };
    let p = pred.align(&universe)?;
    let t = load_truth(truth_path, &a.truth, &universe, graph.as_ref())?;
    let score = nmi(&p, &t)?;
    let (sp, st) = (size_stats(&p), size_stats(&t));
    let text = format!(
        "nmi={score:?}\nk_pred={}\nmean_cluster_size_pred={:?}\nmax_cluster_size_pred={}\nk_truth={}\nmean_cluster_size_truth={:?}\nmax_cluster_size_truth={}\nnmi_formula={NMI_FORMULA}\n",
        sp.count, sp.mean, sp.max, st.count, st.mean, st.max
    );
    out.write_all(text.as_bytes())?;
    if let Some(path) = &a.report {
        std::fs::write(path, &text)?;
    }
    Ok(())
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    match a.model {
        GenModel::Planted(p) => {
            let spec = PlantedSpec { n: p.n, k: p.k, mu: p.mu, avg_degree: p.avg_degree, seed: p.seed };
            let (g, truth) = gen_planted(&spec)?;
            io::write_edge_list(io::create(&with_extension(&a.out, "edges"))?, &g)?;
            io::write_communities(io::create(&with_extension(&a.out, "communities"))?, g.labels(), &truth)?;
        }
        GenModel::ChungLu(c) => {
            let spec = PowerLawSpec { n: c.n, gamma: c.gamma, avg_degree: c.avg_degree, seed: c.seed };
            let g = gen_chung_lu(&spec)?;
            io::write_edge_list(io::create(&with_extension(&a.out, "edges"))?, &g)?;
        }
    }
    Ok(())
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.sizes.is_empty() {
        return Err(Failure::Usage("--sizes needs at least one node count".into()));
    }
    if a.algorithms.is_empty() || a.repeats == 0 {
        return Err(Failure::Usage("need at least one algorithm and one repeat".into()));
    }
    let mut sizes = a.sizes.clone();
    sizes.sort_unstable();
    let mut table = String::from("n\tm\talgorithm\twall_time_s\tgain_evals\tcache_hits\tk\n");
    for &n in &sizes {
        let g = match a.model {
            BenchModel::ChungLu => {
                gen_chung_lu(&PowerLawSpec { n, gamma: a.gamma, avg_degree: a.avg_degree, seed: a.seed })?
            }
            BenchModel::Planted => {
                gen_planted(&PlantedSpec { n, k: a.k, mu: a.mu, avg_degree: a.avg_degree, seed: a.seed })?.0
            }
        };
        for &alg in &a.algorithms {
            let mut times = Vec::with_capacity(a.repeats);
            let mut last = None;
            for _ in 0..a.repeats {
                let (p, stats) = alg.run(&g)?;
                times.push(stats.wall_time);
                last = Some((p, stats));
            }
            let (p, stats) = last.expect("repeats > 0");
            table.push_str(&format!(
                "{n}\t{}\t{}\t{:?}\t{}\t{}\t{}\n",
                g.edge_weight_total(),
                alg.name(),
                median(times).as_secs_f64(),
                stats.gain_evals,
                stats.cache_hits,
                p.cluster_count()
            ));
        }
    }
    emit(&table, a.output.as_deref(), out)
}
