use adapt_qaoa::ansatz::PoolKind;
use adapt_qaoa::harness::{self, ExperimentConfig};
use adapt_qaoa::{Error, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "adapt-qaoa", version, about = "Adaptive and standard QAOA experiments on weighted Max-Cut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random regular graphs as JSON files.
    GenGraphs {
        #[command(flatten)]
        config: ConfigArgs,
        /// Destination directory (default: <output>/graphs).
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Run standard QAOA and adaptive pools over an ensemble.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compare adaptive mixer choices with dominant gauge-potential strings.
    CdStudy {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Recompute the ensemble summary from a sweep CSV.
    Summarize {
        csv: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        delta_e: f64,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit tidy per-figure tables from sweep and cd-study outputs.
    PlotData {
        /// Output directory of a previous sweep and/or cd-study.
        #[arg(long)]
        input: PathBuf,
        /// Destination (default: <input>/plot).
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-3)]
        delta_e: f64,
    },
}

/// Experiment settings; a JSON file is read first, then flags override it.
#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "instances")]
    instance_count: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// Comma-separated adaptive pools: qaoa, single, multi.
    #[arg(long, value_delimiter = ',')]
    pools: Option<Vec<PoolKind>>,
    /// Skip the standard QAOA baseline.
    #[arg(long)]
    no_standard: bool,
    #[arg(long)]
    max_layers: Option<usize>,
    #[arg(long)]
    max_p: Option<usize>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    energy_tol: Option<f64>,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    f_tol: Option<f64>,
    #[arg(long)]
    x_tol: Option<f64>,
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    delta_e: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    cd_orders: Option<Vec<usize>>,
    #[arg(long)]
    cd_grid: Option<usize>,
    #[arg(long)]
    cd_layers: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

macro_rules! set {
    ($dst:expr, $src:expr) => {
        if let Some(v) = $src {
            $dst = v;
        }
    };
}

impl ConfigArgs {
    fn resolve(self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::read(p)?,
            None => ExperimentConfig::default(),
        };
        set!(c.n, self.n);
        set!(c.d, self.d);
        set!(c.instance_count, self.instance_count);
        set!(c.base_seed, self.base_seed);
        set!(c.pools, self.pools);
        if self.no_standard {
            c.standard = false;
        }
        set!(c.max_layers, self.max_layers);
        set!(c.max_p, self.max_p);
        set!(c.gamma0, self.gamma0);
        set!(c.grad_tol, self.grad_tol);
        set!(c.energy_tol, self.energy_tol);
        set!(c.optimizer.initial_step, self.initial_step);
        set!(c.optimizer.f_tol, self.f_tol);
        set!(c.optimizer.x_tol, self.x_tol);
        if self.max_evals.is_some() {
            c.optimizer.max_evals = self.max_evals;
        }
        set!(c.optimizer.restarts, self.restarts);
        set!(c.delta_e, self.delta_e);
        set!(c.cd_orders, self.cd_orders);
        set!(c.cd_grid, self.cd_grid);
        set!(c.cd_layers, self.cd_layers);
        set!(c.output_dir, self.output);
        c.validate()?;
        Ok(c)
    }
}

fn print_json<S: serde::Serialize>(v: &S) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenGraphs { config, dir } => {
            let cfg = config.resolve()?;
            let dir = dir.unwrap_or_else(|| cfg.output_dir.join("graphs"));
            for p in harness::write_graphs(&cfg, &dir)? {
                println!("{}", p.display());
            }
            Ok(())
        }
        Command::Sweep { config, jobs } => {
            let cfg = config.resolve()?;
            let out = harness::run_sweep(&cfg, jobs)?;
            info!("wrote {}", cfg.output_dir.join(harness::RUNS_CSV).display());
            print_json(&out.summary)?;
            match out.failures.len() {
                0 => Ok(()),
                k => Err(Error::RunsFailed(k)),
            }
        }
        Command::CdStudy { config, jobs } => {
            let cfg = config.resolve()?;
            let out = harness::run_cd_study(&cfg, jobs)?;
            print_json(&out.overlap)?;
            match out.failures.len() {
                0 => Ok(()),
                k => Err(Error::RunsFailed(k)),
            }
        }
        Command::Summarize { csv, delta_e, output } => {
            let s = harness::summarize(&csv, delta_e)?;
            match output {
                Some(p) => std::fs::write(p, serde_json::to_string_pretty(&s)? + "\n")?,
                None => print_json(&s)?,
            }
            Ok(())
        }
        Command::PlotData { input, output, delta_e } => {
            let output = output.unwrap_or_else(|| input.join("plot"));
            for p in harness::write_plot_data(&input, &output, delta_e)? {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
