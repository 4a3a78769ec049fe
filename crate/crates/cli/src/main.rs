mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkspam::propagation::PropagationParams;

#[derive(Debug, Parser)]
#[command(name = "linkspam", version, about = "Link-based fake website detection")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an edge list (plus site and label files) into a graph bundle.
    Ingest(IngestArgs),
    /// Score every node with one algorithm.
    Run(RunArgs),
    /// Bootstrap evaluation of one or more algorithms.
    Evaluate(EvaluateArgs),
    /// Top-K accuracy curve of a score file.
    Topk(TopkArgs),
    /// Generate a labeled synthetic web.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// `src<TAB>dst` edge list.
    #[arg(long)]
    pub edges: PathBuf,
    /// `node_id<TAB>site_name` file; required unless --url.
    #[arg(long)]
    pub sites: Option<PathBuf>,
    /// `site_name<TAB>{legit|fake}` file.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Edge endpoints are absolute URLs; sites are their hostnames.
    #[arg(long)]
    pub url: bool,
    /// Bundle to write.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Page,
    Site,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalGranularityArg {
    Page,
    Site,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AtrArg {
    Table1,
    Reversed,
}

/// Propagation parameters. Comma-separated lists form a grid (evaluate only).
#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Damping factor.
    #[arg(long = "d", value_delimiter = ',', default_value = "0.85")]
    pub d: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub beta: Vec<f64>,
    /// QoL prior: a good page may have fewer than k bad out-links.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub k: Vec<usize>,
    /// ParentPenalty seeding threshold on common sites.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub t: Vec<usize>,
    /// ParentPenalty propagation threshold on flagged out-links.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub p: Vec<usize>,
    /// L1 convergence tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
}

impl ParamArgs {
    /// Cartesian product of the listed values.
    pub fn grid(&self) -> Vec<PropagationParams> {
        let mut out = Vec::new();
        for &damping in &self.d {
            for &alpha in &self.alpha {
                for &beta in &self.beta {
                    for &k in &self.k {
                        for &t in &self.t {
                            for &p in &self.p {
                                out.push(PropagationParams {
                                    damping,
                                    alpha,
                                    beta,
                                    k,
                                    t,
                                    p,
                                    tol: self.tol,
                                    max_iters: self.max_iters,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Graph bundle from `ingest`.
    #[arg(long)]
    pub graph: PathBuf,
    /// pagerank, trustrank, antitrustrank, badrank, parentpenalty or qocqol.
    #[arg(long)]
    pub algorithm: String,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "page")]
    pub granularity: GranularityArg,
    #[arg(long, value_enum, default_value = "table1")]
    pub atr_direction: AtrArg,
    /// Also fit a threshold on the labeled sites and write site verdicts.
    #[arg(long)]
    pub verdicts: bool,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated algorithms, `qocqol` for both dual scores, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub algorithm: Vec<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "page")]
    pub granularity: EvalGranularityArg,
    #[arg(long, default_value_t = 30)]
    pub runs: usize,
    /// Seed for the bootstrap splits.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Fit thresholds and select grid parameters on the test split.
    #[arg(long)]
    pub paper_fidelity: bool,
    #[arg(long, value_enum, default_value = "table1")]
    pub atr_direction: AtrArg,
    /// Cut-offs per top-K curve.
    #[arg(long, default_value_t = 20)]
    pub topk_points: usize,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Good,
    Bad,
}

#[derive(Debug, Args)]
pub struct TopkArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Score file from `run`; page or site scores are told apart by length.
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, value_enum)]
    pub class: ClassArg,
    /// Explicit cut-offs; default is evenly spaced points.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// CSV to write.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// TOML file with generator settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub legit_site_count: Option<usize>,
    #[arg(long)]
    pub fake_site_count: Option<usize>,
    #[arg(long)]
    pub pages_per_legit_site: Option<f64>,
    #[arg(long)]
    pub fake_size_multiplier: Option<f64>,
    #[arg(long)]
    pub intra_site_link_prob: Option<f64>,
    #[arg(long)]
    pub legit_to_legit_inter_prob: Option<f64>,
    #[arg(long)]
    pub farm_density: Option<f64>,
    #[arg(long)]
    pub camouflage_prob: Option<f64>,
    #[arg(long)]
    pub contamination_prob: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write a graph bundle with labels.
    #[arg(long)]
    pub bundle: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(anyhow::anyhow!("--threads must be >= 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(anyhow::Error::from)
            .and_then(|pool| pool.install(|| commands::dispatch(cli.command, cli.threads))),
        None => commands::dispatch(cli.command, None),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
