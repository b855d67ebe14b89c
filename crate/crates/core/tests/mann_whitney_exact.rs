use vrpdi::stats::{mann_whitney_p, mann_whitney_u, Metric, Verdict};

/// Counts of each U value over every split of ranks `1..=na+nb` into
/// samples of size `na` and `nb`, ties excluded.
fn u_distribution(na: usize, nb: usize) -> Vec<u64> {
    let n = na + nb;
    let mut counts = vec![0u64; na * nb + 1];
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != na {
            continue;
        }
        let rank_sum: usize = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).sum();
        counts[rank_sum - na * (na + 1) / 2] += 1;
    }
    counts
}

/// Exact two-sided p: share of splits whose U lies at least as far from
/// the mean as the observed one.
fn exact_p(distribution: &[u64], u_observed: f64) -> f64 {
    let mean = (distribution.len() - 1) as f64 / 2.0;
    let observed = (u_observed - mean).abs();
    let total: u64 = distribution.iter().sum();
    let extreme: u64 = distribution
        .iter()
        .enumerate()
        .filter(|&(u, _)| (u as f64 - mean).abs() >= observed - 1e-12)
        .map(|(_, &c)| c)
        .sum();
    extreme as f64 / total as f64
}

/// Samples of sizes `na`, `nb` whose first sample takes the ranks in `mask`.
fn samples(na: usize, nb: usize, mask: u32) -> (Vec<f64>, Vec<f64>) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for i in 0..na + nb {
        if mask & (1 << i) != 0 {
            a.push(i as f64);
        } else {
            b.push(i as f64);
        }
    }
    (a, b)
}

#[test]
fn complete_separation_of_three() {
    assert!((exact_p(&u_distribution(3, 3), 0.0) - 0.1).abs() < 1e-12);
    let r = mann_whitney_u(Metric::Time, &[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], 0.05).unwrap();
    assert_eq!(r.u_statistic, 0.0);
    assert_eq!(r.verdict, Verdict::Draw);
}

#[test]
fn normal_approximation_tracks_exact_for_moderate_samples() {
    let mut worst: f64 = 0.0;
    for na in 5..=8 {
        for nb in 5..=8 {
            let n = na + nb;
            let distribution = u_distribution(na, nb);
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != na {
                    continue;
                }
                let (a, b) = samples(na, nb, mask);
                let (u, p) = mann_whitney_p(&a, &b).unwrap();
                worst = worst.max((p - exact_p(&distribution, u)).abs());
            }
        }
    }
    assert!(worst <= 0.02, "worst gap {worst}");
}

#[test]
fn tiny_samples_are_outside_the_approximation() {
    // Two against two: the exact p of complete separation is 1/3.
    let (u, p) = mann_whitney_p(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
    assert_eq!(u, 0.0);
    assert!((exact_p(&u_distribution(2, 2), u) - 1.0 / 3.0).abs() < 1e-12);
    assert!((p - exact_p(&u_distribution(2, 2), u)).abs() > 0.02);
}
