//! Seeded ensemble sweeps, statistics and on-disk artifacts.

mod cd;
mod plot;
mod stats;
mod table;

pub use cd::{overlap_from_rows, read_overlap_csv, run_cd_study, CdOutcome, OverlapRow, OverlapSeries, OVERLAP_COLUMNS, OVERLAP_CSV};
pub use plot::write_plot_data;
pub use stats::{
    median_with_censoring, series_label, student_t_half_width, summarize_records, EnsembleSummary, LayerStats, ResourceStats,
    SeriesSummary, CI_METHOD, CONFIDENCE,
};
pub use table::{read_runs_csv, write_runs_csv, CSV_COLUMNS};

use crate::ansatz::{run_adapt, run_standard_qaoa, PoolKind, RunConfig, RunRecord};
use crate::error::{Error, Result};
use crate::maxcut::{generate_regular_graph, WeightedGraph};
use crate::simplex::OptimizerConfig;
use log::{error, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

pub const RUNS_CSV: &str = "runs.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const CONFIG_JSON: &str = "config.json";
pub const FAILURES_JSON: &str = "failures.json";

/// Everything that determines a sweep or a counterdiabatic study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub d: usize,
    pub instance_count: usize,
    /// Instance `i` uses graph seed `base_seed + i`.
    pub base_seed: u64,
    /// Pools grown by the adaptive runner.
    pub pools: Vec<PoolKind>,
    /// Whether to include the standard QAOA depth sweep.
    pub standard: bool,
    pub max_layers: usize,
    pub max_p: usize,
    pub gamma0: f64,
    pub grad_tol: f64,
    pub energy_tol: f64,
    pub optimizer: OptimizerConfig,
    /// Accuracy threshold for resource and selection statistics.
    pub delta_e: f64,
    pub cd_orders: Vec<usize>,
    pub cd_grid: usize,
    /// Layer budget of the adaptive runs in the counterdiabatic study.
    pub cd_layers: usize,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let run = RunConfig::default();
        ExperimentConfig {
            n: 6,
            d: 3,
            instance_count: 20,
            base_seed: 0,
            pools: vec![PoolKind::Single, PoolKind::Multi],
            standard: true,
            max_layers: run.max_layers,
            max_p: run.max_layers,
            gamma0: run.gamma0,
            grad_tol: run.grad_tol,
            energy_tol: run.energy_tol,
            optimizer: run.optimizer,
            delta_e: 1e-3,
            cd_orders: vec![1, 2, 3],
            cd_grid: crate::counterdiabatic::DEFAULT_LAMBDA_GRID,
            cd_layers: 5,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.instance_count == 0 {
            return bad("instance_count must be at least 1".into());
        }
        if self.n < 2 || self.n > crate::state::MAX_STATE_QUBITS {
            return Err(Error::QubitCount { n: self.n, max: crate::state::MAX_STATE_QUBITS });
        }
        if self.d >= self.n {
            return Err(Error::DegreeTooLarge { n: self.n, d: self.d });
        }
        if self.n * self.d % 2 != 0 {
            return Err(Error::DegreeParity { n: self.n, d: self.d });
        }
        if self.base_seed.checked_add(self.instance_count as u64).is_none() {
            return bad("seed range overflows u64".into());
        }
        if self.max_p == 0 {
            return bad("max_p must be at least 1".into());
        }
        if !(self.delta_e.is_finite() && self.delta_e > 0.0) {
            return bad(format!("delta_e must be positive, got {}", self.delta_e));
        }
        if self.cd_grid < 2 || self.cd_layers == 0 || self.cd_orders.iter().any(|&o| o == 0) {
            return bad("cd_grid must be at least 2, cd_layers and every cd order at least 1".into());
        }
        self.run_config(self.max_layers).validate()?;
        self.optimizer.validate(2)
    }

    pub fn run_config(&self, max_layers: usize) -> RunConfig {
        RunConfig {
            max_layers,
            grad_tol: self.grad_tol,
            energy_tol: self.energy_tol,
            gamma0: self.gamma0,
            optimizer: self.optimizer.clone(),
        }
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.instance_count as u64).map(move |i| self.base_seed + i)
    }

    pub fn graphs(&self) -> Result<Vec<WeightedGraph>> {
        self.seeds().map(|s| generate_regular_graph(self.n, self.d, s)).collect()
    }
}

/// A run that errored; the rest of the sweep continues without it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub run_id: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub summary: EnsembleSummary,
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

/// Creates `dir` and proves it writable.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"")?;
    fs::remove_file(probe)?;
    Ok(())
}

pub fn graph_file_name(g: &WeightedGraph) -> String {
    let d = g.degree().map_or("x".to_string(), |d| d.to_string());
    let s = g.seed().map_or("x".to_string(), |s| s.to_string());
    format!("graph-n{}-d{d}-s{s}.json", g.num_vertices())
}

/// Writes one JSON file per generated graph into `dir`.
pub fn write_graphs(cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    prepare_output_dir(dir)?;
    cfg.graphs()?
        .iter()
        .map(|g| {
            let p = dir.join(graph_file_name(g));
            g.write(&p)?;
            Ok(p)
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Task {
    Standard,
    Adapt(PoolKind),
}

fn task_id(g: &WeightedGraph, t: Task) -> String {
    let s = g.seed().unwrap_or_default();
    match t {
        Task::Standard => format!("standard-n{}-d{}-s{s}", g.num_vertices(), g.degree().unwrap_or_default()),
        Task::Adapt(p) => format!("adapt-{p}-n{}-d{}-s{s}", g.num_vertices(), g.degree().unwrap_or_default()),
    }
}

/// Runs `work` on a pool of `jobs` threads, or on the global pool when `None`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, work: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(Error::InvalidArgument("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map(|p| p.install(work))
            .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}"))),
    }
}

pub(crate) fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Runs the standard baseline and every requested adaptive pool on each
/// instance, then writes graphs, per-run JSON, the consolidated CSV and the
/// summary under `cfg.output_dir`. Output is independent of `jobs`.
pub fn run_sweep(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<SweepOutcome> {
    cfg.validate()?;
    let out = &cfg.output_dir;
    prepare_output_dir(out)?;
    let graphs = cfg.graphs()?;
    let mut tasks = Vec::new();
    for g in &graphs {
        if cfg.standard {
            tasks.push((g, Task::Standard));
        }
        tasks.extend(cfg.pools.iter().map(|&p| (g, Task::Adapt(p))));
    }
    if tasks.is_empty() {
        return Err(Error::InvalidArgument("nothing to run: no pools and standard disabled".into()));
    }
    info!("sweep: {} runs over {} instances", tasks.len(), graphs.len());
    let results: Vec<(String, Result<RunRecord>)> = with_jobs(jobs, || {
        tasks
            .par_iter()
            .map(|&(g, t)| {
                let r = match t {
                    Task::Standard => run_standard_qaoa::<f64>(g, &cfg.run_config(cfg.max_p)),
                    Task::Adapt(p) => run_adapt::<f64>(g, p, &cfg.run_config(cfg.max_layers)),
                };
                (task_id(g, t), r)
            })
            .collect()
    })?;

    let graph_dir = out.join("graphs");
    let run_dir = out.join("runs");
    fs::create_dir_all(&graph_dir)?;
    fs::create_dir_all(&run_dir)?;
    for g in &graphs {
        g.write(graph_dir.join(graph_file_name(g)))?;
    }
    let (records, failures) = split_results(results);
    for r in &records {
        write_json(&run_dir.join(format!("{}.json", r.run_id)), r)?;
    }
    write_runs_csv(&out.join(RUNS_CSV), &records)?;
    let summary = summarize_records(&records, cfg.delta_e)?;
    write_json(&out.join(SUMMARY_JSON), &summary)?;
    write_json(&out.join(CONFIG_JSON), cfg)?;
    write_failures(out, &failures)?;
    Ok(SweepOutcome { summary, records, failures })
}

pub(crate) fn split_results(results: Vec<(String, Result<RunRecord>)>) -> (Vec<RunRecord>, Vec<RunFailure>) {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (id, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                error!("run {id} failed: {e}");
                failures.push(RunFailure { run_id: id, error: e.to_string() });
            }
        }
    }
    (records, failures)
}

pub(crate) fn write_failures(out: &Path, failures: &[RunFailure]) -> Result<()> {
    let path = out.join(FAILURES_JSON);
    if failures.is_empty() {
        if path.exists() {
            fs::remove_file(path)?;
        }
        Ok(())
    } else {
        write_json(&path, &failures)
    }
}

/// Recomputes the summary of a sweep from its CSV.
pub fn summarize(csv_path: impl AsRef<Path>, delta_e: f64) -> Result<EnsembleSummary> {
    summarize_records(&read_runs_csv(csv_path)?, delta_e)
}
