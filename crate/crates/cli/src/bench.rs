use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use vrpdi::evaluator::{decode, Actor, LegPurpose};
use vrpdi::stats::{tally_csv, tally_pair, tally_table, Verdict};
use vrpdi::{EaConfig, Instance, Mode};

use crate::datasets;
use crate::output::{write_atomic, OutputDir, SummaryRow};
use crate::reference::{DRONE_RANGE, DRONE_RANGE_FRACTION, MODE_COMPARISON};
use crate::runner::{Batch, Failure};
use crate::{BenchArgs, Comparison, Table};

#[derive(Debug, Serialize)]
struct ModeRow {
    dataset: String,
    nodes: usize,
    vrp_time: f64,
    vrp_distance: f64,
    vrp_cpu_minutes: Option<f64>,
    vrpdi_time: f64,
    vrpdi_distance: f64,
    vrpdi_cpu_minutes: Option<f64>,
    time_improvement_pct: f64,
    distance_improvement_pct: f64,
    time_verdict: Verdict,
    distance_verdict: Verdict,
    ref_vrp_time: f64,
    ref_vrp_distance: f64,
    ref_vrpdi_time: f64,
    ref_vrpdi_distance: f64,
    ref_time_improvement_pct: f64,
    ref_distance_improvement_pct: f64,
    ref_vrp_cpu_minutes: f64,
    ref_vrpdi_cpu_minutes: f64,
}

#[derive(Debug, Serialize)]
struct RangeRow {
    dataset: String,
    nodes: usize,
    max_distance: f64,
    max_drone_distance: f64,
    pairs: usize,
    best_time: f64,
    mean_time: f64,
    longest_drone_delivery: f64,
    ref_max_distance: f64,
    ref_max_drone_distance: f64,
    ref_ea: f64,
    ref_nnhis: f64,
}

type Plan<'a> = (Vec<(&'a str, PathBuf)>, Vec<&'a str>);

/// Datasets of the chosen table, split into those found in `files` and
/// those missing.
fn plan<'a>(names: &[&'a str], only: &[String], files: &[PathBuf]) -> anyhow::Result<Plan<'a>> {
    for wanted in only {
        anyhow::ensure!(
            names.iter().any(|n| n.eq_ignore_ascii_case(wanted)),
            "`{wanted}` is not part of this table"
        );
    }
    let mut present = Vec::new();
    let mut missing = Vec::new();
    for &name in names {
        if !only.is_empty() && !only.iter().any(|o| o.eq_ignore_ascii_case(name)) {
            continue;
        }
        match datasets::find(files, name) {
            Some(path) => present.push((name, path.clone())),
            None => missing.push(name),
        }
    }
    Ok((present, missing))
}

pub fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let dir = args
        .dataset_dir
        .clone()
        .or_else(|| args.run.data_dir.clone())
        .ok_or_else(|| anyhow::anyhow!("no dataset directory given and VRPDI_DATA_DIR is unset"))?;
    let files = datasets::instance_files(&dir)?;
    anyhow::ensure!(!files.is_empty(), "no instance files in {}", dir.display());

    let names: Vec<&str> = match args.table {
        Table::VrpVsVrpdi => MODE_COMPARISON.iter().map(|r| r.dataset).collect(),
        Table::MaxDroneDistance => DRONE_RANGE.iter().map(|r| r.dataset).collect(),
    };
    let (present, missing) = plan(&names, &args.only, &files)?;
    if !missing.is_empty() {
        eprintln!("missing datasets in {}: {}", dir.display(), missing.join(", "));
    }
    anyhow::ensure!(
        !present.is_empty(),
        "none of the table's datasets are in {}",
        dir.display()
    );

    let config = args.run.ea_config()?;
    let pool = args.run.pool()?;
    let out = OutputDir::create(&args.run.out)?;
    match args.table {
        Table::VrpVsVrpdi => mode_table(&args, &present, &config, &pool, &out),
        Table::MaxDroneDistance => range_table(&args, &present, &config, &pool, &out),
    }
}

fn mode_table(
    args: &BenchArgs,
    present: &[(&str, PathBuf)],
    config: &EaConfig,
    pool: &rayon::ThreadPool,
    out: &OutputDir,
) -> anyhow::Result<()> {
    let runs = args.run.runs;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut comparisons = Vec::new();
    let mut verdicts = Vec::new();
    let mut batches = Vec::new();
    for (name, path) in present {
        let instance = named(datasets::load(path, args.run.max_drone_fraction)?, name);
        let vrp = Batch::run(pool, &instance, config, Mode::Vrp, runs, out)?;
        let vrpdi = Batch::run(pool, &instance, config, Mode::Vrpdi, runs, out)?;
        vrp.write_best(&instance, out)?;
        vrpdi.write_best(&instance, out)?;
        let (a, b) = (
            SummaryRow::new(&vrp, args.run.timing),
            SummaryRow::new(&vrpdi, args.run.timing),
        );
        let cmp = Comparison::new(&vrp, &vrpdi)?;
        let reference = MODE_COMPARISON
            .iter()
            .find(|r| r.dataset == *name)
            .expect("listed");
        rows.push(ModeRow {
            dataset: name.to_string(),
            nodes: instance.nodes.len(),
            vrp_time: a.best_time,
            vrp_distance: a.best_distance,
            vrp_cpu_minutes: a.cpu_minutes,
            vrpdi_time: b.best_time,
            vrpdi_distance: b.best_distance,
            vrpdi_cpu_minutes: b.cpu_minutes,
            time_improvement_pct: cmp.time_improvement_pct,
            distance_improvement_pct: cmp.distance_improvement_pct,
            time_verdict: cmp.time_verdict,
            distance_verdict: cmp.distance_verdict,
            ref_vrp_time: reference.vrp_time,
            ref_vrp_distance: reference.vrp_distance,
            ref_vrpdi_time: reference.vrpdi_time,
            ref_vrpdi_distance: reference.vrpdi_distance,
            ref_time_improvement_pct: reference.time_pct,
            ref_distance_improvement_pct: reference.distance_pct,
            ref_vrp_cpu_minutes: reference.vrp_cpu,
            ref_vrpdi_cpu_minutes: reference.vrpdi_cpu,
        });
        verdicts.push((cmp.time_verdict, cmp.distance_verdict));
        summaries.extend([a, b]);
        comparisons.push(cmp);
        batches.extend([vrp, vrpdi]);
    }
    out.write_timing("timing.csv", &batches.iter().collect::<Vec<_>>())?;

    out.write_summary("summary.csv", &summaries)?;
    out.write_csv("comparison.csv", &comparisons)?;
    out.write_csv("bench_vrp_vs_vrpdi.csv", &rows)?;
    let tally = tally_pair("VRPDi", "VRP", &verdicts);
    write_atomic(&out.path("hypothesis_tests.csv"), tally_csv(&tally).as_bytes())?;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<16} {:>9} {:>9} {:>9} {:>9} {:>8} {:>8} | {:>9} {:>9} {:>6}",
        "dataset",
        "VRP time",
        "VRPDi",
        "VRP dist",
        "VRPDi",
        "time %",
        "dist %",
        "ref VRP",
        "ref VRPDi",
        "ref %"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<16} {:>9.2} {:>9.2} {:>9.2} {:>9.2} {:>8.1} {:>8.1} | {:>9.2} {:>9.2} {:>6.0}",
            r.dataset,
            r.vrp_time,
            r.vrpdi_time,
            r.vrp_distance,
            r.vrpdi_distance,
            r.time_improvement_pct,
            r.distance_improvement_pct,
            r.ref_vrp_time,
            r.ref_vrpdi_time,
            r.ref_time_improvement_pct,
        );
    }
    text.push('\n');
    text.push_str(&tally_table(&tally));
    write_atomic(&out.path("bench_vrp_vs_vrpdi.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn range_table(
    args: &BenchArgs,
    present: &[(&str, PathBuf)],
    config: &EaConfig,
    pool: &rayon::ThreadPool,
    out: &OutputDir,
) -> anyhow::Result<()> {
    let fraction = args.run.max_drone_fraction.unwrap_or(DRONE_RANGE_FRACTION);
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut batches = Vec::new();
    for (name, path) in present {
        let reference = DRONE_RANGE.iter().find(|r| r.dataset == *name).expect("listed");
        let instance = named(datasets::load(path, Some(fraction))?, name);
        let limit = instance.max_drone_distance.expect("fraction applied");
        let config = EaConfig {
            pair_count_override: args.run.pairs.or(Some(reference.pairs)),
            ..config.clone()
        };
        let batch = Batch::run(pool, &instance, &config, Mode::Vrpdi, args.run.runs, out)?;
        batch.write_best(&instance, out)?;
        let longest = longest_drone_delivery(&batch, &instance)?;
        if longest > limit + 1e-9 {
            return Err(Failure(format!(
                "{name}: drone delivery of length {longest} exceeds range {limit}"
            ))
            .into());
        }
        let summary = SummaryRow::new(&batch, args.run.timing);
        rows.push(RangeRow {
            dataset: name.to_string(),
            nodes: instance.nodes.len(),
            max_distance: instance.max_pairwise_distance(),
            max_drone_distance: limit,
            pairs: batch.best().genotype.pair_count(),
            best_time: summary.best_time,
            mean_time: summary.mean_time,
            longest_drone_delivery: longest,
            ref_max_distance: reference.max_distance,
            ref_max_drone_distance: reference.max_drone_distance,
            ref_ea: reference.ea,
            ref_nnhis: reference.nnhis,
        });
        summaries.push(summary);
        batches.push(batch);
    }

    out.write_summary("summary.csv", &summaries)?;
    out.write_timing("timing.csv", &batches.iter().collect::<Vec<_>>())?;
    out.write_csv("bench_max_drone_distance.csv", &rows)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<20} {:>6} {:>9} {:>9} {:>5} {:>9} {:>9} | {:>9} {:>9} {:>9}",
        "dataset",
        "nodes",
        "max dist",
        "range",
        "pairs",
        "best",
        "longest",
        "ref range",
        "ref EA",
        "ref NNHis"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<20} {:>6} {:>9.2} {:>9.2} {:>5} {:>9.2} {:>9.2} | {:>9.2} {:>9.2} {:>9.2}",
            r.dataset,
            r.nodes,
            r.max_distance,
            r.max_drone_distance,
            r.pairs,
            r.best_time,
            r.longest_drone_delivery,
            r.ref_max_drone_distance,
            r.ref_ea,
            r.ref_nnhis,
        );
    }
    write_atomic(&out.path("bench_max_drone_distance.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn named(mut instance: Instance, name: &str) -> Instance {
    instance.name = name.to_string();
    instance
}

/// Longest launch-to-customer drone flight in the batch's best solution.
pub fn longest_drone_delivery(batch: &Batch, instance: &Instance) -> anyhow::Result<f64> {
    let schedule = decode(&batch.best().genotype, instance)?;
    Ok(schedule
        .pairs
        .iter()
        .flat_map(|p| p.legs_of(Actor::Drone))
        .filter(|l| l.purpose == LegPurpose::Delivery)
        .map(|l| l.length())
        .fold(0.0, f64::max))
}
