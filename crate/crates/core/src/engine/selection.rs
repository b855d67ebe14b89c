use rand::Rng;

use super::Solution;

/// Assigns nothing new (fitness is fixed at construction) but orders the
/// members best first. The sort is stable, so equal members keep their
/// relative order.
pub fn evaluate_population(members: &mut [Solution]) {
    members.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
}

/// Index picked by a roulette wheel over `fitness` for a draw `r` in
/// `[0, 1)`: the first member whose cumulative normalised fitness exceeds
/// `r`.
pub fn roulette_pick(fitness: &[f64], r: f64) -> usize {
    let total: f64 = fitness.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return ((r * fitness.len() as f64) as usize).min(fitness.len() - 1);
    }
    let mut cumulative = 0.0;
    for (j, f) in fitness.iter().enumerate() {
        cumulative += f / total;
        if r < cumulative {
            return j;
        }
    }
    fitness.len() - 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("population of {size} cannot supply {elites} elites")]
pub struct SelectionError {
    pub size: usize,
    pub elites: usize,
}

/// Breeding pool as indices into `members` (which must be sorted best
/// first): the `elite_count` best, then fitness-proportional draws with
/// replacement until the pool is as large as the population.
pub fn select<R: Rng + ?Sized>(
    members: &[Solution],
    elite_count: usize,
    rng: &mut R,
) -> Result<Vec<usize>, SelectionError> {
    if members.len() < elite_count || elite_count == 0 {
        return Err(SelectionError {
            size: members.len(),
            elites: elite_count,
        });
    }
    let fitness: Vec<f64> = members.iter().map(|m| m.fitness).collect();
    let mut pool: Vec<usize> = (0..elite_count).collect();
    for _ in elite_count..members.len() {
        pool.push(roulette_pick(&fitness, rng.gen::<f64>()));
    }
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::evaluator::Genotype;

    fn solution(objective: f64) -> Solution {
        Solution::new(Genotype::all_truck(&[1]), objective, 0.0, 0.0)
    }

    #[test]
    fn fitness_is_inverse_objective() {
        assert_eq!(solution(10.0).fitness, 0.1);
    }

    #[test]
    fn sorts_best_first() {
        let mut m = vec![solution(10.0), solution(5.0)];
        evaluate_population(&mut m);
        assert_eq!(m[0].objective, 5.0);
    }

    #[test]
    fn ties_keep_order() {
        let mut m: Vec<Solution> = (1..=4)
            .map(|i| Solution::new(Genotype::all_truck(&[i]), 7.0, 0.0, 0.0))
            .collect();
        evaluate_population(&mut m);
        let nodes: Vec<usize> = m.iter().map(|s| s.genotype.genes[0].node).collect();
        assert_eq!(nodes, vec![1, 2, 3, 4]);
    }

    #[test]
    fn roulette_hand_trace() {
        assert_eq!(roulette_pick(&[0.75, 0.25], 0.5), 0);
        assert_eq!(roulette_pick(&[0.75, 0.25], 0.75), 1);
        assert_eq!(roulette_pick(&[0.75, 0.25], 0.0), 0);
    }

    #[test]
    fn two_members_two_elites() {
        let m = vec![solution(1.0), solution(2.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(select(&m, 2, &mut rng).unwrap(), vec![0, 1]);
        assert!(select(&m, 3, &mut rng).is_err());
    }

    #[test]
    fn uniform_fitness_uniform_roulette() {
        // Chi-by-eye: each count within 3 sigma of the binomial mean.
        let k = 10;
        let draws = 100_000;
        let fitness = vec![0.2; k];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = vec![0usize; k];
        for _ in 0..draws {
            counts[roulette_pick(&fitness, rng.gen())] += 1;
        }
        let p = 1.0 / k as f64;
        let mean = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() <= 3.0 * sigma, "count {c}");
        }
    }
}
