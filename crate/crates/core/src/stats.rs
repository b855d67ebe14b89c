//! Mann-Whitney U comparisons, win/draw/loss tallies and run summaries.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::engine::{sample_stddev, RunReport};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("sample {0} is empty")]
    EmptySample(char),
    #[error("need at least 2 runs, got {0}")]
    TooFewRuns(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Time,
    Distance,
}

/// Outcome for the first sample; lower values are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Win,
    Draw,
    Loss,
}

impl Verdict {
    pub fn mirrored(self) -> Self {
        match self {
            Verdict::Win => Verdict::Loss,
            Verdict::Draw => Verdict::Draw,
            Verdict::Loss => Verdict::Win,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub metric: Metric,
    /// U statistic of the first sample.
    pub u_statistic: f64,
    pub p_value: f64,
    pub verdict: Verdict,
}

/// Average ranks (1-based) of `values`, ties sharing the mean rank, plus
/// the tie-correction term `sum(t^3 - t)`.
fn ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Two-sided Mann-Whitney U test with the tie-corrected normal
/// approximation and a continuity correction. Returns `(U_a, p)`.
pub fn mann_whitney_p(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    if a.is_empty() {
        return Err(StatsError::EmptySample('a'));
    }
    if b.is_empty() {
        return Err(StatsError::EmptySample('b'));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let joined: Vec<f64> = a.iter().chain(b).copied().collect();
    let (r, ties) = ranks(&joined);
    let rank_sum_a: f64 = r[..a.len()].iter().sum();
    let u_a = rank_sum_a - na * (na + 1.0) / 2.0;

    let n = na + nb;
    let mean = na * nb / 2.0;
    let variance = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if variance.is_nan() || variance <= 0.0 {
        return Ok((u_a, 1.0));
    }
    let z = ((u_a - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = (2.0 * normal.sf(z)).min(1.0);
    Ok((u_a, p))
}

/// Compares two samples of a metric where lower is better: `Win` when the
/// first is significantly lower, `Loss` when significantly higher.
pub fn mann_whitney_u(
    metric: Metric,
    a: &[f64],
    b: &[f64],
    alpha: f64,
) -> Result<ComparisonResult, StatsError> {
    let (u, p) = mann_whitney_p(a, b)?;
    let mean = a.len() as f64 * b.len() as f64 / 2.0;
    let verdict = if p >= alpha {
        Verdict::Draw
    } else if u < mean {
        Verdict::Win
    } else {
        Verdict::Loss
    };
    Ok(ComparisonResult {
        metric,
        u_statistic: u,
        p_value: p,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub win: u32,
    pub draw: u32,
    pub loss: u32,
}

impl Tally {
    pub fn record(&mut self, verdict: Verdict) {
        match verdict {
            Verdict::Win => self.win += 1,
            Verdict::Draw => self.draw += 1,
            Verdict::Loss => self.loss += 1,
        }
    }
}

/// Win/draw/loss counts of one variant, per metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyRow {
    pub variant: String,
    pub time: Tally,
    pub distance: Tally,
}

/// Tallies for both variants from the verdicts of the first one.
pub fn tally_pair(first: &str, second: &str, verdicts: &[(Verdict, Verdict)]) -> [TallyRow; 2] {
    let mut a = TallyRow {
        variant: first.to_string(),
        time: Tally::default(),
        distance: Tally::default(),
    };
    let mut b = TallyRow {
        variant: second.to_string(),
        ..a.clone()
    };
    for &(time, distance) in verdicts {
        a.time.record(time);
        a.distance.record(distance);
        b.time.record(time.mirrored());
        b.distance.record(distance.mirrored());
    }
    [a, b]
}

pub fn tally_csv(rows: &[TallyRow]) -> String {
    let mut out =
        String::from("variant,time_win,time_draw,time_loss,distance_win,distance_draw,distance_loss\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.variant, r.time.win, r.time.draw, r.time.loss, r.distance.win, r.distance.draw, r.distance.loss
        );
    }
    out
}

pub fn tally_table(rows: &[TallyRow]) -> String {
    let width = rows.iter().map(|r| r.variant.len()).max().unwrap_or(0).max(7);
    let mut out = String::new();
    let _ = writeln!(out, "{:>width$} | {:^17} | {:^17}", "", "Time", "Distance");
    let _ = writeln!(
        out,
        "{:>width$} | {:>5} {:>5} {:>5} | {:>5} {:>5} {:>5}",
        "", "Win", "Draw", "Loss", "Win", "Draw", "Loss"
    );
    let _ = writeln!(out, "{}", "-".repeat(width + 42));
    for r in rows {
        let _ = writeln!(
            out,
            "{:>width$} | {:>5} {:>5} {:>5} | {:>5} {:>5} {:>5}",
            r.variant, r.time.win, r.time.draw, r.time.loss, r.distance.win, r.distance.draw, r.distance.loss
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub runs: usize,
    pub best_time: f64,
    pub mean_time: f64,
    pub stddev_time: f64,
    pub best_distance: f64,
    pub mean_distance: f64,
    pub stddev_distance: f64,
    pub mean_cpu_minutes: f64,
}

/// Sample statistics over the final incumbent of each run. The best
/// distance is that of the run with the best time.
pub fn summarize_runs(reports: &[RunReport]) -> Result<RunSummary, StatsError> {
    if reports.len() < 2 {
        return Err(StatsError::TooFewRuns(reports.len()));
    }
    let times: Vec<f64> = reports.iter().map(|r| r.final_objective).collect();
    let distances: Vec<f64> = reports.iter().map(|r| r.final_truck_distance).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let best = reports
        .iter()
        .min_by(|a, b| a.final_objective.total_cmp(&b.final_objective))
        .expect("non-empty");
    let cpu: Vec<f64> = reports.iter().map(|r| r.elapsed_seconds / 60.0).collect();
    Ok(RunSummary {
        runs: reports.len(),
        best_time: best.final_objective,
        mean_time: mean(&times),
        stddev_time: sample_stddev(&times),
        best_distance: best.final_truck_distance,
        mean_distance: mean(&distances),
        stddev_distance: sample_stddev(&distances),
        mean_cpu_minutes: mean(&cpu),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Mode;

    fn report(time: f64, distance: f64) -> RunReport {
        RunReport {
            mode: Mode::Vrpdi,
            seed: 0,
            pair_count: 1,
            generations: 0,
            best_objective: vec![time],
            unique_fraction: vec![1.0],
            fitness_stddev: vec![0.0],
            final_objective: time,
            final_truck_distance: distance,
            final_drone_distance: 0.0,
            evaluations: 1,
            elapsed_seconds: 0.0,
        }
    }

    #[test]
    fn ranks_with_ties() {
        let (r, ties) = ranks(&[1.0, 2.0, 2.0, 4.0, 5.0, 6.0, 7.0, 7.0, 9.0, 10.0]);
        assert_eq!(r, vec![1.0, 2.5, 2.5, 4.0, 5.0, 6.0, 7.5, 7.5, 9.0, 10.0]);
        assert_eq!(ties, 12.0);
    }

    #[test]
    fn complete_separation_small_sample_is_a_draw() {
        let r = mann_whitney_u(Metric::Time, &[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], 0.05).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        assert_eq!(r.verdict, Verdict::Draw);
        // Exact two-sided p is 2/20 = 0.1.
        assert!((r.p_value - 0.1).abs() < 0.02);
    }

    #[test]
    fn separation_at_thirty_runs_is_a_win() {
        let a: Vec<f64> = (0..30).map(|i| 30.0 + i as f64 * 0.1).collect();
        let b: Vec<f64> = (0..30).map(|i| 50.0 + i as f64 * 0.1).collect();
        let r = mann_whitney_u(Metric::Time, &a, &b, 0.05).unwrap();
        assert_eq!(r.verdict, Verdict::Win);
        let r = mann_whitney_u(Metric::Time, &b, &a, 0.05).unwrap();
        assert_eq!(r.verdict, Verdict::Loss);
        assert_eq!(r.u_statistic, 900.0);
    }

    #[test]
    fn identical_samples_draw() {
        let a = [3.0, 1.0, 4.0, 1.0, 5.0];
        let r = mann_whitney_u(Metric::Distance, &a, &a, 0.05).unwrap();
        assert_eq!(r.verdict, Verdict::Draw);
        let constant = [2.0; 6];
        let r = mann_whitney_u(Metric::Time, &constant, &constant, 0.05).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn empty_sample_rejected() {
        assert_eq!(
            mann_whitney_u(Metric::Time, &[], &[1.0], 0.05),
            Err(StatsError::EmptySample('a'))
        );
    }

    #[test]
    fn summary_statistics() {
        let s = summarize_runs(&[report(10.0, 100.0), report(20.0, 50.0)]).unwrap();
        assert_eq!(s.mean_time, 15.0);
        assert!((s.stddev_time - 50f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.best_time, 10.0);
        assert_eq!(s.best_distance, 100.0);
        let s = summarize_runs(&[report(7.0, 1.0), report(7.0, 1.0), report(7.0, 1.0)]).unwrap();
        assert_eq!(s.stddev_time, 0.0);
        assert_eq!(
            summarize_runs(&[report(1.0, 1.0)]),
            Err(StatsError::TooFewRuns(1))
        );
    }

    #[test]
    fn tally_layout() {
        let rows = tally_pair(
            "VRPDi",
            "VRP",
            &[(Verdict::Win, Verdict::Win), (Verdict::Win, Verdict::Draw)],
        );
        assert_eq!(
            rows[0].time,
            Tally {
                win: 2,
                draw: 0,
                loss: 0
            }
        );
        assert_eq!(
            rows[1].time,
            Tally {
                win: 0,
                draw: 0,
                loss: 2
            }
        );
        assert_eq!(
            rows[1].distance,
            Tally {
                win: 0,
                draw: 1,
                loss: 1
            }
        );
        let csv = tally_csv(&rows);
        assert!(csv.contains("VRPDi,2,0,0,1,1,0"));
        let table = tally_table(&rows);
        assert_eq!(table.lines().count(), 5);
    }
}
