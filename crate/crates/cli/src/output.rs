use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use anyhow::Context;
use serde::Serialize;
use vrpdi::evaluator::{decode, render_svg, Schedule};
use vrpdi::{Genotype, Instance, Mode, RunReport, Solution};

use crate::runner::{run_seed, Batch};

/// Writes `bytes` to a temporary sibling of `path`, then renames it over
/// `path`, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let name = path
        .file_name()
        .with_context(|| format!("not a file path: {}", path.display()))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(
        ".{name}.{}.{}.tmp",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let write = || -> std::io::Result<()> {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        anyhow::Error::new(e).context(format!("writing {}", path.display()))
    })
}

/// One line of the summary CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub mode: Mode,
    pub runs: usize,
    pub best_time: f64,
    pub mean_time: f64,
    pub stddev_time: f64,
    pub best_distance: f64,
    pub mean_distance: f64,
    pub stddev_distance: f64,
    pub cpu_minutes: Option<f64>,
    pub seed: u64,
}

impl SummaryRow {
    /// Run times vary between executions, so they are left blank unless
    /// `timing` is requested.
    pub fn new(batch: &Batch, timing: bool) -> Self {
        let s = batch.summary();
        SummaryRow {
            dataset: batch.dataset.clone(),
            mode: batch.mode,
            runs: s.runs,
            best_time: s.best_time,
            mean_time: s.mean_time,
            stddev_time: s.stddev_time,
            best_distance: s.best_distance,
            mean_distance: s.mean_distance,
            stddev_distance: s.stddev_distance,
            cpu_minutes: timing.then_some(s.mean_cpu_minutes),
            seed: batch.seed,
        }
    }
}

#[derive(Serialize)]
struct TimingRow<'a> {
    dataset: &'a str,
    mode: Mode,
    run: usize,
    seed: u64,
    cpu_minutes: f64,
}

#[derive(Serialize)]
struct BestSolution<'a> {
    dataset: &'a str,
    mode: Mode,
    seed: u64,
    objective: f64,
    truck_distance: f64,
    drone_distance: f64,
    pairs: usize,
    encoding: String,
    genotype: &'a Genotype,
    schedule: &'a Schedule,
}

pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(root.join("runs"))
            .with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_run_report(
        &self,
        dataset: &str,
        mode: Mode,
        run: usize,
        report: &RunReport,
    ) -> anyhow::Result<()> {
        let path = self
            .root
            .join("runs")
            .join(format!("{dataset}_{mode}_run{run:03}.json"));
        write_atomic(&path, serde_json::to_string_pretty(report)?.as_bytes())
    }

    /// Best solution of a batch as JSON plus an SVG plot of its routes.
    pub fn write_best(
        &self,
        instance: &Instance,
        mode: Mode,
        seed: u64,
        solution: &Solution,
    ) -> anyhow::Result<()> {
        let schedule = decode(&solution.genotype, instance)?;
        let best = BestSolution {
            dataset: &instance.name,
            mode,
            seed,
            objective: solution.objective,
            truck_distance: solution.truck_distance,
            drone_distance: solution.drone_distance,
            pairs: solution.genotype.pair_count(),
            encoding: solution.genotype.to_string(),
            genotype: &solution.genotype,
            schedule: &schedule,
        };
        let stem = format!("{}_{mode}_best", instance.name);
        write_atomic(
            &self.path(&format!("{stem}.json")),
            serde_json::to_string_pretty(&best)?.as_bytes(),
        )?;
        write_atomic(
            &self.path(&format!("{stem}.svg")),
            render_svg(&schedule, instance).as_bytes(),
        )
    }

    pub fn write_csv<T: Serialize>(&self, name: &str, rows: &[T]) -> anyhow::Result<()> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in rows {
            writer.serialize(row)?;
        }
        let bytes = writer.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        write_atomic(&self.path(name), &bytes)
    }

    pub fn write_summary(&self, name: &str, rows: &[SummaryRow]) -> anyhow::Result<()> {
        self.write_csv(name, rows)
    }

    pub fn write_timing(&self, name: &str, batches: &[&Batch]) -> anyhow::Result<()> {
        let rows: Vec<TimingRow> = batches
            .iter()
            .flat_map(|b| {
                b.reports.iter().enumerate().map(move |(k, r)| TimingRow {
                    dataset: &b.dataset,
                    mode: b.mode,
                    run: k,
                    seed: run_seed(b.seed, k),
                    cpu_minutes: r.elapsed_seconds / 60.0,
                })
            })
            .collect();
        self.write_csv(name, &rows)
    }
}
