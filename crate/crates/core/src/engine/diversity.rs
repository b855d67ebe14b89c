use serde::{Deserialize, Serialize};

/// Phenotypic diversity of one population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diversity {
    /// Distinct fitness values divided by the population size.
    pub unique_fraction: f64,
    /// Sample (N - 1) standard deviation of fitness; 0 for one member.
    pub fitness_stddev: f64,
}

pub fn diversity(fitness: &[f64]) -> Diversity {
    assert!(!fitness.is_empty(), "diversity of an empty population");
    let mut sorted = fitness.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    Diversity {
        unique_fraction: sorted.len() as f64 / fitness.len() as f64,
        fitness_stddev: sample_stddev(fitness),
    }
}

pub(crate) fn sample_stddev(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    // Welford update.
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    (m2 / (n - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(diversity(&[0.1, 0.1, 0.2, 0.3]).unique_fraction, 0.75);
        assert_eq!(diversity(&[0.4; 7]).fitness_stddev, 0.0);
        assert!((diversity(&[1.0, 3.0]).fitness_stddev - 2f64.sqrt()).abs() < 1e-15);
        let single = diversity(&[0.5]);
        assert_eq!(single.fitness_stddev, 0.0);
        assert_eq!(single.unique_fraction, 1.0);
    }
}
