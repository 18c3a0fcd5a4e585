//! Batch front end: `simulate`, `limits`, `compare` and `validate`.
//!
//! Settings come from built-in defaults, then an optional JSON config
//! (`--config`), then flags; later sources win field by field. On failure
//! the process exits nonzero and prints `{"error": {"kind", "message"}}` on
//! stderr.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::{
    cmd_compare, cmd_limits, cmd_simulate, cmd_validate, seed_dir_name, snapshot_file_name,
    ud_rows, xw_rows, CompareEntry, CompareInput, CompareOutput, LimitsManifest, RunManifest,
    SeedRun, Source, ValidationReport, THREADS_ENV, TOOL, VERSION,
};
pub use config::{ExperimentConfig, Overrides, ParamsSpec};

use crate::error::Result;
use crate::stats::FitMethod;

#[derive(Debug, Parser)]
#[command(
    name = "ncg",
    version,
    about = "N-interactions random graphs: simulate, compute limit laws, compare"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the graph evolution and write snapshot CSVs and a manifest.
    Simulate(CommonArgs),
    /// Write the limit tables x_{d,w}, x_w and u_d.
    Limits(CommonArgs),
    /// Compare simulated snapshots with the limit laws.
    Compare(CompareArgs),
    /// Report parameter violations and derived constants.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FitArg {
    Lls,
    Mle,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Clique size N.
    #[arg(short = 'N', long = "clique-size")]
    clique_size: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Seed; repeat for several replicas.
    #[arg(long = "seed", value_name = "U64")]
    seeds: Vec<u64>,
    #[arg(long)]
    steps: Option<u64>,
    /// Comma-separated snapshot steps (default: the final step).
    #[arg(long, value_delimiter = ',')]
    snapshot_at: Option<Vec<u64>>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    wmax: Option<usize>,
    #[arg(long)]
    wcut: Option<u64>,
    #[arg(long)]
    dcut: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    tail_tol: Option<f64>,
    #[arg(long, value_enum)]
    fit: Option<FitArg>,
    /// Also write each replica's edge list.
    #[arg(long)]
    export_edges: bool,
    /// Track every m-clique, not only N- and (N-1)-cliques.
    #[arg(long)]
    track_all_cliques: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Compare the limit table with itself.
    #[arg(long = "self", conflicts_with = "snapshot")]
    self_check: bool,
    /// Snapshot CSV from `simulate`; repeatable. Without it the configured
    /// seeds are simulated.
    #[arg(long, value_name = "PATH")]
    snapshot: Vec<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let flags = Overrides {
            params: ParamsSpec {
                clique_size: self.clique_size,
                p: self.p,
                q: self.q,
                r: self.r,
            },
            seeds: self.seeds.clone(),
            steps: self.steps,
            snapshot_at: self.snapshot_at.clone(),
            w_max: self.wmax,
            w_cut: self.wcut,
            d_cut: self.dcut,
            eps: self.eps,
            tail_tol: self.tail_tol,
            fit_method: self.fit.map(|f| match f {
                FitArg::Lls => FitMethod::LogLogLS,
                FitArg::Mle => FitMethod::DiscreteMLE,
            }),
            out_dir: self.out.clone(),
            export_edges: self.export_edges,
            track_all_cliques: self.track_all_cliques,
        };
        ExperimentConfig::load(self.config.as_deref(), &flags)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let m = cmd_simulate(&a.config()?)?;
            print_json(&m)
        }
        Command::Limits(a) => {
            let m = cmd_limits(&a.config()?)?;
            print_json(&m)
        }
        Command::Compare(a) => {
            let input = if a.self_check {
                CompareInput::SelfCheck
            } else if !a.snapshot.is_empty() {
                CompareInput::Snapshots(a.snapshot.clone())
            } else {
                CompareInput::Simulate
            };
            let cfg = a.common.config()?;
            print_json(&cmd_compare(&cfg, &input)?)
        }
        Command::Validate(a) => print_json(&cmd_validate(&a.config()?)?),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim_end()));
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            1
        }
    }
}
