use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::io::{self, UdRow, XwRow};
use crate::limits::{
    degree_marginal_from_table, u_d, u_d_asymptotic, xdw_table, xw_asymptotic, xw_closed_form,
    xw_recurrence, LimitTable,
};
use crate::params::{DerivedConstants, ModelParams, ValidationTier, Violation};
use crate::simulator::{write_edge_list, GraphState, SimConfig, Snapshot, GENERATOR_NAME};
use crate::stats::{
    compare, empirical_ratios, vn_drift, ComparisonReport, DriftPoint, EmpiricalRatios,
};

pub const TOOL: &str = "ncg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable capping how many seeds run at once.
pub const THREADS_ENV: &str = "NCG_THREADS";

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn base_meta(params: &ModelParams) -> Vec<(String, String)> {
    vec![
        ("tool".into(), format!("{TOOL} {VERSION}")),
        ("N".into(), params.clique_size.to_string()),
        ("p".into(), io::fmt_f64(params.p)),
        ("q".into(), io::fmt_f64(params.q)),
        ("r".into(), io::fmt_f64(params.r)),
    ]
}

fn seed_meta(params: &ModelParams, seed: u64, steps: u64) -> Vec<(String, String)> {
    let mut m = base_meta(params);
    m.push(("seed".into(), seed.to_string()));
    m.push(("steps".into(), steps.to_string()));
    m.push(("generator".into(), GENERATOR_NAME.into()));
    m
}

/// Runs `f` over the seeds, at most `NCG_THREADS` at a time, keeping order.
fn for_each_seed<T, F>(seeds: &[u64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .map(|v| {
            v.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::Config(format!("{THREADS_ENV}={v} is not a positive integer"))
            })
        })
        .transpose()?
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| seeds.par_iter().map(|&s| f(s)).collect())
}

/// What one seed produced under `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    /// Relative to the output directory.
    pub dir: String,
    pub snapshots: Vec<String>,
    pub drift: String,
    pub edges: Option<String>,
    pub vertex_count: u64,
    pub edge_count: u64,
    /// FNV-1a digest of the final state, hex.
    pub state_digest: String,
}

/// `manifest.json` of a simulate run. Contains nothing that varies between
/// identical invocations; wall time goes to `timing.log`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub generator: String,
    pub params: ModelParams,
    pub constants: Option<DerivedConstants>,
    pub seeds: Vec<u64>,
    pub steps: u64,
    pub snapshot_at: Vec<u64>,
    pub track_all_cliques: bool,
    pub runs: Vec<SeedRun>,
}

pub fn snapshot_file_name(n: u64) -> String {
    format!("snapshot-n{n}.csv")
}

pub fn seed_dir_name(seed: u64) -> String {
    format!("seed-{seed}")
}

fn simulate_seed(
    params: ModelParams,
    seed: u64,
    cfg: &ExperimentConfig,
    snapshot_at: &[u64],
) -> Result<(GraphState, Vec<Snapshot>, f64)> {
    let t0 = Instant::now();
    let mut state = GraphState::init_with(
        params,
        seed,
        SimConfig {
            track_all_cliques: cfg.track_all_cliques,
        },
    )?;
    let snaps = state.run(cfg.steps, snapshot_at)?;
    Ok((state, snaps, t0.elapsed().as_secs_f64()))
}

/// Simulates every seed and writes per-seed snapshot CSVs, a drift CSV,
/// optional edge lists, `manifest.json` and `timing.log`.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<RunManifest> {
    let params = cfg.validate()?;
    let snapshot_at = cfg.snapshot_indices()?;
    let out = &cfg.out_dir;
    create_dir(out)?;

    let results = for_each_seed(&cfg.seeds, |seed| {
        let (state, snaps, secs) = simulate_seed(params, seed, cfg, &snapshot_at)?;
        let dir_name = seed_dir_name(seed);
        let dir = out.join(&dir_name);
        create_dir(&dir)?;
        let meta = seed_meta(&params, seed, cfg.steps);
        let mut files = Vec::new();
        for s in &snaps {
            let name = snapshot_file_name(s.n());
            io::write_snapshot_csv(&dir.join(&name), s, &meta)?;
            files.push(name);
        }
        io::write_drift_csv(&dir.join("drift.csv"), &vn_drift(&snaps, params.p), &meta)?;
        let edges = if cfg.export_edges {
            write_edge_list(&state, &dir.join("edges.txt"))?;
            Some("edges.txt".to_string())
        } else {
            None
        };
        let run = SeedRun {
            seed,
            dir: dir_name,
            snapshots: files,
            drift: "drift.csv".into(),
            edges,
            vertex_count: state.vertex_count() as u64,
            edge_count: state.edge_count() as u64,
            state_digest: format!("{:016x}", state.digest()),
        };
        Ok((run, secs))
    })?;

    let mut timing = String::new();
    let mut runs = Vec::new();
    for (run, secs) in results {
        let line = format!(
            "seed={} steps={} wall_seconds={secs:.3}",
            run.seed, cfg.steps
        );
        eprintln!("{line}");
        let _ = writeln!(timing, "{line}");
        runs.push(run);
    }
    let timing_path = out.join("timing.log");
    std::fs::write(&timing_path, timing).map_err(|e| Error::io(&timing_path, e))?;

    let manifest = RunManifest {
        tool: TOOL.into(),
        version: VERSION.into(),
        generator: GENERATOR_NAME.into(),
        params,
        constants: params.derive_constants().ok(),
        seeds: cfg.seeds.clone(),
        steps: cfg.steps,
        snapshot_at,
        track_all_cliques: cfg.track_all_cliques,
        runs,
    };
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// `limits.json`, written next to the three limit CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitsManifest {
    pub tool: String,
    pub version: String,
    pub params: ModelParams,
    pub constants: DerivedConstants,
    pub w_max: usize,
    pub d_cut: u64,
    pub eps: f64,
    pub tail_tol: f64,
    pub normalization_deficit: f64,
    /// False when `alpha2 = 0`: `u_d` are then finite column sums of the
    /// table and carry no tail bound.
    pub degree_marginals_certified: bool,
    pub files: Vec<String>,
}

/// Weight-marginal rows: recurrence, closed form and asymptote; the last
/// two are `None` when `alpha = 0`.
pub fn xw_rows(c: &DerivedConstants, w_max: usize) -> Vec<XwRow> {
    xw_recurrence(c, w_max)
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let w = i as u64 + 1;
            XwRow {
                w,
                x_w: x,
                closed_form: xw_closed_form(c, w).ok(),
                asymptotic: xw_asymptotic(c, w).ok(),
            }
        })
        .collect()
}

/// Degree-marginal rows for `d = N-1 ..= d_cut`.
pub fn ud_rows(table: &LimitTable, d_cut: u64, eps: f64, tail_tol: f64) -> Result<Vec<UdRow>> {
    let c = table.constants();
    let n = table.clique_size();
    (table.d_min()..=d_cut)
        .map(|d| {
            if c.alpha2 > 0.0 {
                let m = u_d(c, n, d, eps, tail_tol)?;
                Ok(UdRow {
                    d,
                    u_d: m.value,
                    asymptotic: u_d_asymptotic(c, d).ok(),
                    tail_bound: Some(m.tail_bound),
                })
            } else {
                Ok(UdRow {
                    d,
                    u_d: degree_marginal_from_table(table, d),
                    asymptotic: None,
                    tail_bound: None,
                })
            }
        })
        .collect()
}

/// Writes `xdw.csv`, `xw.csv`, `ud.csv` and `limits.json`.
pub fn cmd_limits(cfg: &ExperimentConfig) -> Result<LimitsManifest> {
    let params = cfg.validate()?;
    let c = params.derive_constants()?;
    let out = &cfg.out_dir;
    create_dir(out)?;
    let table = xdw_table(&c, params.clique_size, cfg.w_max);
    let meta = base_meta(&params);

    io::write_xdw_csv(&out.join("xdw.csv"), &table, &meta)?;
    io::write_xw_csv(&out.join("xw.csv"), &xw_rows(&c, cfg.w_max), &meta)?;
    let mut ud_meta = meta.clone();
    ud_meta.push(("eps".into(), io::fmt_f64(cfg.eps)));
    ud_meta.push(("tail_tol".into(), io::fmt_f64(cfg.tail_tol)));
    io::write_ud_csv(
        &out.join("ud.csv"),
        &ud_rows(&table, cfg.d_cut, cfg.eps, cfg.tail_tol)?,
        &ud_meta,
    )?;

    let manifest = LimitsManifest {
        tool: TOOL.into(),
        version: VERSION.into(),
        params,
        constants: c,
        w_max: cfg.w_max,
        d_cut: cfg.d_cut,
        eps: cfg.eps,
        tail_tol: cfg.tail_tol,
        normalization_deficit: table.normalization_deficit(),
        degree_marginals_certified: c.alpha2 > 0.0,
        files: vec!["xdw.csv".into(), "xw.csv".into(), "ud.csv".into()],
    };
    write_json(&out.join("limits.json"), &manifest)?;
    Ok(manifest)
}

/// Where the empirical side of a comparison came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    /// The limit table compared against itself.
    SelfCheck,
    Simulation {
        seed: u64,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareEntry {
    pub source: Source,
    pub report: ComparisonReport,
}

/// `report.json` of a compare run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOutput {
    pub tool: String,
    pub version: String,
    pub generator: String,
    pub params: ModelParams,
    pub steps: Option<u64>,
    pub w_max: usize,
    pub entries: Vec<CompareEntry>,
    /// `|V_n/n - p|` per simulated seed.
    pub drift: Vec<(u64, Vec<DriftPoint>)>,
}

/// Inputs of `compare` beyond the config.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum CompareInput {
    /// Simulate every configured seed.
    #[default]
    Simulate,
    /// Compare the limit table with itself.
    SelfCheck,
    /// Read snapshot CSVs written by `simulate`.
    Snapshots(Vec<PathBuf>),
}

/// Compares simulations (or given snapshots) with the limit laws and writes
/// `report.json`.
pub fn cmd_compare(cfg: &ExperimentConfig, input: &CompareInput) -> Result<CompareOutput> {
    let params = cfg.validate()?;
    let c = params.derive_constants()?;
    let table = xdw_table(&c, params.clique_size, cfg.w_max);
    let settings = cfg.compare_settings(params);
    let out = &cfg.out_dir;
    create_dir(out)?;

    let mut entries = Vec::new();
    let mut drift = Vec::new();
    let mut steps = None;
    match input {
        CompareInput::SelfCheck => {
            let emp = EmpiricalRatios::from_table(&table, cfg.d_cut, cfg.eps, cfg.tail_tol)?;
            entries.push(CompareEntry {
                source: Source::SelfCheck,
                report: compare(&emp, &table, &settings)?,
            });
        }
        CompareInput::Snapshots(paths) => {
            if paths.is_empty() {
                return Err(Error::Config("no snapshot files given".into()));
            }
            for path in paths {
                let snap = io::read_snapshot_csv(path)?;
                entries.push(CompareEntry {
                    source: Source::File { path: path.clone() },
                    report: compare(&empirical_ratios(&snap)?, &table, &settings)?,
                });
            }
        }
        CompareInput::Simulate => {
            let snapshot_at = cfg.snapshot_indices()?;
            steps = Some(cfg.steps);
            let per_seed = for_each_seed(&cfg.seeds, |seed| {
                let (_, snaps, _) = simulate_seed(params, seed, cfg, &snapshot_at)?;
                let reports = snaps
                    .iter()
                    .map(|s| compare(&empirical_ratios(s)?, &table, &settings))
                    .collect::<Result<Vec<_>>>()?;
                Ok((seed, reports, vn_drift(&snaps, params.p)))
            })?;
            for (seed, reports, series) in per_seed {
                for report in reports {
                    entries.push(CompareEntry {
                        source: Source::Simulation { seed },
                        report,
                    });
                }
                drift.push((seed, series));
            }
        }
    }

    let output = CompareOutput {
        tool: TOOL.into(),
        version: VERSION.into(),
        generator: GENERATOR_NAME.into(),
        params,
        steps,
        w_max: cfg.w_max,
        entries,
        drift,
    };
    write_json(&out.join("report.json"), &output)?;
    Ok(output)
}

/// Output of `validate`: the violations at each tier and, if defined, the
/// derived constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub params: ModelParams,
    pub simulable: Vec<Violation>,
    pub theorem_grade: Vec<Violation>,
    pub constants: Option<DerivedConstants>,
}

pub fn cmd_validate(cfg: &ExperimentConfig) -> Result<ValidationReport> {
    let params = cfg.params.resolve()?;
    Ok(ValidationReport {
        params,
        simulable: params.validate(ValidationTier::Simulable),
        theorem_grade: params.validate(ValidationTier::TheoremGrade),
        constants: params.derive_constants().ok(),
    })
}
