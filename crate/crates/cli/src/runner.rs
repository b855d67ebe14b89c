use std::fmt;

use rayon::prelude::*;
use vrpdi::evaluator::check_feasibility;
use vrpdi::stats::{summarize_runs, RunSummary};
use vrpdi::{run, EaConfig, Instance, Mode, RunReport, Solution};

use crate::output::OutputDir;

/// A solve that could not produce a feasible result (exit code 1).
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

/// Seed of run `k` in a batch started from `base`.
pub fn run_seed(base: u64, k: usize) -> u64 {
    base.wrapping_add(k as u64)
}

/// Results of all runs of one mode on one instance, in run order.
pub struct Batch {
    pub dataset: String,
    pub mode: Mode,
    pub seed: u64,
    pub reports: Vec<RunReport>,
    pub solutions: Vec<Solution>,
}

impl Batch {
    /// Executes `runs` independent runs on `pool` and writes each run's
    /// report as soon as it finishes.
    pub fn run(
        pool: &rayon::ThreadPool,
        instance: &Instance,
        config: &EaConfig,
        mode: Mode,
        runs: usize,
        out: &OutputDir,
    ) -> anyhow::Result<Batch> {
        let results: Vec<anyhow::Result<(Solution, RunReport)>> = pool.install(|| {
            (0..runs)
                .into_par_iter()
                .map(|k| {
                    let config = EaConfig {
                        seed: run_seed(config.seed, k),
                        ..config.clone()
                    };
                    let (solution, report) = run(instance, &config, mode)
                        .map_err(|e| Failure(format!("{} {mode} run {k}: {e}", instance.name)))?;
                    let violations = check_feasibility(&solution.genotype, instance);
                    if let Some(v) = violations.first() {
                        return Err(Failure(format!(
                            "{} {mode} run {k}: infeasible result ({v})",
                            instance.name
                        ))
                        .into());
                    }
                    out.write_run_report(&instance.name, mode, k, &report)?;
                    Ok((solution, report))
                })
                .collect()
        });
        let mut reports = Vec::with_capacity(runs);
        let mut solutions = Vec::with_capacity(runs);
        for result in results {
            let (solution, report) = result?;
            reports.push(report);
            solutions.push(solution);
        }
        Ok(Batch {
            dataset: instance.name.clone(),
            mode,
            seed: config.seed,
            reports,
            solutions,
        })
    }

    /// Index of the run with the lowest time; earlier runs win ties.
    pub fn best_run(&self) -> usize {
        let mut best = 0;
        for (k, r) in self.reports.iter().enumerate() {
            if r.final_objective < self.reports[best].final_objective {
                best = k;
            }
        }
        best
    }

    pub fn best(&self) -> &Solution {
        &self.solutions[self.best_run()]
    }

    pub fn times(&self) -> Vec<f64> {
        self.reports.iter().map(|r| r.final_objective).collect()
    }

    pub fn distances(&self) -> Vec<f64> {
        self.reports.iter().map(|r| r.final_truck_distance).collect()
    }

    /// Sample statistics over the runs; a single run has zero spread.
    pub fn summary(&self) -> RunSummary {
        summarize_runs(&self.reports).unwrap_or_else(|_| {
            let r = &self.reports[0];
            RunSummary {
                runs: 1,
                best_time: r.final_objective,
                mean_time: r.final_objective,
                stddev_time: 0.0,
                best_distance: r.final_truck_distance,
                mean_distance: r.final_truck_distance,
                stddev_distance: 0.0,
                mean_cpu_minutes: r.elapsed_seconds / 60.0,
            }
        })
    }

    pub fn write_best(&self, instance: &Instance, out: &OutputDir) -> anyhow::Result<()> {
        let k = self.best_run();
        out.write_best(instance, self.mode, run_seed(self.seed, k), &self.solutions[k])
    }
}
