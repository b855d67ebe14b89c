//! Generational evolutionary algorithm with elitist roulette selection,
//! position-preserving crossover, swap/bit-inversion mutation and repair.

mod config;
mod diversity;
mod operators;
mod selection;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{ConfigError, EaConfig, Mode};
pub(crate) use diversity::sample_stddev;
pub use diversity::{diversity, Diversity};
pub use operators::{
    crossover, crossover_with_cuts, mutate, random_genotype, random_segments, repair, swap_genes, truck_only,
};
pub use selection::{evaluate_population, roulette_pick, select, SelectionError};

use crate::evaluator::{check_feasibility, evaluate, DecodeError, Genotype};
use crate::model::{fleet_size, Instance, ModelError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot split {customers} customers over {pairs} pairs of capacity {capacity}")]
    Fleet {
        customers: usize,
        pairs: usize,
        capacity: u32,
    },
    #[error("the engine assumes unit customer demand")]
    NonUnitDemand,
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error("decoding a repaired genotype failed: {0}")]
    Decode(#[from] DecodeError),
}

/// An evaluated genotype.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub genotype: Genotype,
    /// Makespan of the decoded schedule.
    pub objective: f64,
    /// `1 / objective`.
    pub fitness: f64,
    pub truck_distance: f64,
    pub drone_distance: f64,
}

impl Solution {
    pub fn new(genotype: Genotype, objective: f64, truck_distance: f64, drone_distance: f64) -> Self {
        Solution {
            genotype,
            objective,
            fitness: 1.0 / objective,
            truck_distance,
            drone_distance,
        }
    }

    pub fn evaluate(genotype: Genotype, instance: &Instance) -> Result<Self, DecodeError> {
        let totals = evaluate(&genotype, instance)?;
        Ok(Solution::new(
            genotype,
            totals.system_time,
            totals.truck_distance,
            totals.drone_distance,
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Solution>,
    pub generation: usize,
}

impl Population {
    pub fn best(&self) -> &Solution {
        &self.members[0]
    }

    pub fn fitness(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.fitness).collect()
    }
}

/// Per-run traces. Timing is kept out of the serialized form so that a
/// fixed seed reproduces the report byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: Mode,
    pub seed: u64,
    pub pair_count: usize,
    pub generations: usize,
    /// Incumbent objective after initialisation and after each generation.
    pub best_objective: Vec<f64>,
    pub unique_fraction: Vec<f64>,
    pub fitness_stddev: Vec<f64>,
    pub final_objective: f64,
    pub final_truck_distance: f64,
    pub final_drone_distance: f64,
    pub evaluations: u64,
    #[serde(skip)]
    pub elapsed_seconds: f64,
}

/// Number of pairs for this run: the override, else the fleet-size rule.
pub fn pair_count(instance: &Instance, config: &EaConfig) -> Result<usize, EngineError> {
    let pairs = match config.pair_count_override {
        Some(p) => p,
        None => fleet_size(instance)?,
    };
    let customers = instance.customer_count();
    if pairs == 0 || pairs > customers || customers > pairs * instance.capacity as usize {
        return Err(EngineError::Fleet {
            customers,
            pairs,
            capacity: instance.capacity,
        });
    }
    Ok(pairs)
}

/// Deterministic RNG for one independent task of a run.
fn task_rng(seed: u64, generation: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((generation << 32) | task);
    rng
}

const SELECTION_TASK: u64 = 0xFFFF_FFFF;

fn pick_partner<R: Rng + ?Sized>(pool: &[usize], members: &[Solution], first: usize, rng: &mut R) -> usize {
    let a = &members[first].genotype;
    for _ in 0..16 {
        let candidate = pool[rng.gen_range(0..pool.len())];
        if members[candidate].genotype != *a {
            return candidate;
        }
    }
    let distinct: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&i| members[i].genotype != *a)
        .collect();
    if distinct.is_empty() {
        first
    } else {
        distinct[rng.gen_range(0..distinct.len())]
    }
}

fn repaired(genotype: Genotype, instance: &Instance, mode: Mode) -> Genotype {
    let genotype = match mode {
        Mode::Vrp => truck_only(&genotype),
        Mode::Vrpdi => genotype,
    };
    if check_feasibility(&genotype, instance).is_empty() {
        genotype
    } else {
        repair(&genotype, instance)
    }
}

/// Runs the evolutionary algorithm and returns the best solution found
/// together with its per-generation traces.
pub fn run(instance: &Instance, config: &EaConfig, mode: Mode) -> Result<(Solution, RunReport), EngineError> {
    config.validate()?;
    if instance.nodes[1..].iter().any(|n| n.demand != 1) {
        return Err(EngineError::NonUnitDemand);
    }
    let started = Instant::now();
    let pairs = pair_count(instance, config)?;
    let customers: Vec<usize> = instance.customers().collect();
    let capacity = instance.capacity as usize;
    let size = config.population_size;
    let elites = config.elite_count();
    let seed = config.seed;

    let initial = (0..size)
        .into_par_iter()
        .map(|j| {
            let mut rng = task_rng(seed, 0, j as u64);
            let g = random_genotype(&customers, pairs, capacity, mode, &mut rng);
            Solution::evaluate(repaired(g, instance, mode), instance)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut population = Population {
        members: initial,
        generation: 0,
    };
    evaluate_population(&mut population.members);
    let mut incumbent = population.best().clone();
    let mut evaluations = size as u64;

    let mut best_objective = Vec::with_capacity(config.generations + 1);
    let mut unique_fraction = Vec::with_capacity(config.generations + 1);
    let mut fitness_stddev = Vec::with_capacity(config.generations + 1);
    let mut record = |pop: &Population, best: &Solution| {
        let d = diversity(&pop.fitness());
        best_objective.push(best.objective);
        unique_fraction.push(d.unique_fraction);
        fitness_stddev.push(d.fitness_stddev);
    };
    record(&population, &incumbent);

    for generation in 1..=config.generations {
        let mut rng = task_rng(seed, generation as u64, SELECTION_TASK);
        let pool = select(&population.members, elites, &mut rng)?;
        let members = &population.members;
        let pool = &pool;
        let mut children = (0..size)
            .into_par_iter()
            .map(|j| {
                let mut rng = task_rng(seed, generation as u64, j as u64);
                let first = pool[rng.gen_range(0..pool.len())];
                let second = pick_partner(pool, members, first, &mut rng);
                let child = crossover(&members[first].genotype, &members[second].genotype, &mut rng);
                let child = mutate(&child, config.mutation_rate, mode, &mut rng);
                Solution::evaluate(repaired(child, instance, mode), instance)
            })
            .collect::<Result<Vec<_>, _>>()?;
        evaluations += size as u64;
        evaluate_population(&mut children);
        if children[0].objective < incumbent.objective {
            incumbent = children[0].clone();
        }
        population = Population {
            members: children,
            generation,
        };
        record(&population, &incumbent);
    }

    let report = RunReport {
        mode,
        seed,
        pair_count: pairs,
        generations: config.generations,
        best_objective,
        unique_fraction,
        fitness_stddev,
        final_objective: incumbent.objective,
        final_truck_distance: incumbent.truck_distance,
        final_drone_distance: incumbent.drone_distance,
        evaluations,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    Ok((incumbent, report))
}
