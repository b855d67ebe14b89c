mod bench;
mod datasets;
mod output;
mod reference;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vrpdi::evaluator::improvement;
use vrpdi::stats::{mann_whitney_u, Metric, Verdict, DEFAULT_ALPHA};
use vrpdi::{EaConfig, Mode};

use crate::output::{write_atomic, OutputDir, SummaryRow};
use crate::runner::{Batch, Failure};

/// Vehicle routing with truck-drone pairs and in-flight interception.
#[derive(Debug, Parser)]
#[command(name = "vrpdi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance in one mode over several seeded runs.
    Solve(SolveArgs),
    /// Solve one instance in both modes and test the difference.
    Compare(CompareArgs),
    /// Reproduce a benchmark table over a directory of instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Vrp,
    Vrpdi,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Vrp => Mode::Vrp,
            ModeArg::Vrpdi => Mode::Vrpdi,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Independent runs; run k uses seed + k.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Base seed of all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    jobs: Option<usize>,
    /// Algorithm parameters as JSON or `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Drone range as a fraction of the largest distance between two nodes.
    #[arg(long, value_name = "F")]
    max_drone_fraction: Option<f64>,
    /// Number of truck-drone pairs instead of the capacity rule.
    #[arg(long, value_name = "K")]
    pairs: Option<usize>,
    /// Directory receiving reports, plots and CSV files.
    #[arg(long, value_name = "DIR", default_value = "results")]
    out: PathBuf,
    /// Fill the cpu_minutes column with measured run times.
    #[arg(long)]
    timing: bool,
    /// Directory searched for instances given by name.
    #[arg(long, env = "VRPDI_DATA_DIR", value_name = "DIR")]
    data_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file, or a dataset name looked up in the data directory.
    instance: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Vrpdi)]
    mode: ModeArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    instance: String,
    /// Compare the drone mode against itself.
    #[arg(long, hide = true)]
    same_mode: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    VrpVsVrpdi,
    MaxDroneDistance,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Instance directory (defaults to the data directory).
    dataset_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Table::VrpVsVrpdi)]
    table: Table,
    /// Restrict the table to these datasets.
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    only: Vec<String>,
    #[command(flatten)]
    run: RunArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Compare(args) => compare(args),
        Command::Bench(args) => bench::bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<Failure>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

impl RunArgs {
    fn ea_config(&self) -> anyhow::Result<EaConfig> {
        let mut config = match &self.config {
            Some(path) => {
                EaConfig::load(path).map_err(|e| anyhow::anyhow!("config {}: {e}", path.display()))?
            }
            None => EaConfig::default(),
        };
        config.seed = self.seed;
        if self.pairs.is_some() {
            config.pair_count_override = self.pairs;
        }
        config.validate()?;
        if self.runs == 0 {
            anyhow::bail!("--runs must be at least 1");
        }
        Ok(config)
    }

    fn pool(&self) -> anyhow::Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(jobs) = self.jobs {
            anyhow::ensure!(jobs > 0, "--jobs must be at least 1");
            builder = builder.num_threads(jobs);
        }
        Ok(builder.build()?)
    }
}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let instance = datasets::resolve(
        &args.instance,
        args.run.data_dir.as_deref(),
        args.run.max_drone_fraction,
    )?;
    let config = args.run.ea_config()?;
    let pool = args.run.pool()?;
    let out = OutputDir::create(&args.run.out)?;
    let mode = Mode::from(args.mode);

    let batch = Batch::run(&pool, &instance, &config, mode, args.run.runs, &out)?;
    batch.write_best(&instance, &out)?;
    let row = SummaryRow::new(&batch, args.run.timing);
    out.write_summary("summary.csv", std::slice::from_ref(&row))?;
    out.write_timing("timing.csv", &[&batch])?;
    println!(
        "{} {}: best time {:.2}, mean time {:.2}, best distance {:.2} over {} runs",
        instance.name, mode, row.best_time, row.mean_time, row.best_distance, row.runs
    );
    Ok(())
}

fn compare(args: CompareArgs) -> anyhow::Result<()> {
    let instance = datasets::resolve(
        &args.instance,
        args.run.data_dir.as_deref(),
        args.run.max_drone_fraction,
    )?;
    let config = args.run.ea_config()?;
    let pool = args.run.pool()?;
    let out = OutputDir::create(&args.run.out)?;

    let baseline_mode = if args.same_mode { Mode::Vrpdi } else { Mode::Vrp };
    let baseline = Batch::run(&pool, &instance, &config, baseline_mode, args.run.runs, &out)?;
    let drones = Batch::run(&pool, &instance, &config, Mode::Vrpdi, args.run.runs, &out)?;
    drones.write_best(&instance, &out)?;
    if !args.same_mode {
        baseline.write_best(&instance, &out)?;
    }

    let rows = [
        SummaryRow::new(&baseline, args.run.timing),
        SummaryRow::new(&drones, args.run.timing),
    ];
    out.write_summary("summary.csv", &rows)?;
    out.write_timing("timing.csv", &[&baseline, &drones])?;

    let comparison = Comparison::new(&baseline, &drones)?;
    out.write_csv("comparison.csv", std::slice::from_ref(&comparison))?;
    println!("{}", comparison.describe());
    let report = serde_json::to_string_pretty(&comparison)?;
    write_atomic(&out.path("comparison.json"), report.as_bytes())?;
    Ok(())
}

/// Drone mode measured against the baseline on one instance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Comparison {
    pub dataset: String,
    pub runs: usize,
    pub baseline_best_time: f64,
    pub vrpdi_best_time: f64,
    pub time_improvement_pct: f64,
    pub baseline_best_distance: f64,
    pub vrpdi_best_distance: f64,
    pub distance_improvement_pct: f64,
    pub time_u: f64,
    pub time_p: f64,
    pub time_verdict: Verdict,
    pub distance_u: f64,
    pub distance_p: f64,
    pub distance_verdict: Verdict,
}

impl Comparison {
    pub fn new(baseline: &Batch, drones: &Batch) -> anyhow::Result<Self> {
        let b = baseline.summary();
        let d = drones.summary();
        let time = mann_whitney_u(Metric::Time, &drones.times(), &baseline.times(), DEFAULT_ALPHA)?;
        let distance = mann_whitney_u(
            Metric::Distance,
            &drones.distances(),
            &baseline.distances(),
            DEFAULT_ALPHA,
        )?;
        Ok(Comparison {
            dataset: drones.dataset.clone(),
            runs: drones.reports.len(),
            baseline_best_time: b.best_time,
            vrpdi_best_time: d.best_time,
            time_improvement_pct: improvement(b.best_time, d.best_time).unwrap_or(f64::NAN),
            baseline_best_distance: b.best_distance,
            vrpdi_best_distance: d.best_distance,
            distance_improvement_pct: improvement(b.best_distance, d.best_distance).unwrap_or(f64::NAN),
            time_u: time.u_statistic,
            time_p: time.p_value,
            time_verdict: time.verdict,
            distance_u: distance.u_statistic,
            distance_p: distance.p_value,
            distance_verdict: distance.verdict,
        })
    }

    fn describe(&self) -> String {
        format!(
            "{}: time {:.2} -> {:.2} ({:+.2}%, {:?} p={:.4}); distance {:.2} -> {:.2} ({:+.2}%, {:?} p={:.4})",
            self.dataset,
            self.baseline_best_time,
            self.vrpdi_best_time,
            self.time_improvement_pct,
            self.time_verdict,
            self.time_p,
            self.baseline_best_distance,
            self.vrpdi_best_distance,
            self.distance_improvement_pct,
            self.distance_verdict,
            self.distance_p,
        )
    }
}
