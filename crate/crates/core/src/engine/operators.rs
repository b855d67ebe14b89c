//! Variation operators on the metameric genotype.

use rand::seq::SliceRandom;
use rand::Rng;

use super::config::Mode;
use crate::evaluator::{launch_node, Delivery, Gene, Genotype};
use crate::model::Instance;

/// Random visit order, random delivery tags (drone with probability 1/2
/// when drones are in play), random segment lengths in `[1, capacity]`.
/// The result still needs [`repair`].
pub fn random_genotype<R: Rng + ?Sized>(
    customers: &[usize],
    pairs: usize,
    capacity: usize,
    mode: Mode,
    rng: &mut R,
) -> Genotype {
    let mut order = customers.to_vec();
    order.shuffle(rng);
    let genes = order
        .into_iter()
        .map(|node| Gene {
            node,
            delivery: if mode.uses_drones() && rng.gen_bool(0.5) {
                Delivery::Drone
            } else {
                Delivery::Truck
            },
        })
        .collect();
    let segments = random_segments(customers.len(), pairs, capacity, rng);
    Genotype::new(genes, segments)
}

/// Splits `n` genes into `pairs` segments of length `1..=capacity`, handing
/// out the surplus one gene at a time to random segments with room left.
/// Requires `pairs <= n <= pairs * capacity`.
pub fn random_segments<R: Rng + ?Sized>(n: usize, pairs: usize, capacity: usize, rng: &mut R) -> Vec<usize> {
    assert!(pairs >= 1 && pairs <= n && n <= pairs * capacity);
    let mut lengths = vec![1usize; pairs];
    let mut open: Vec<usize> = (0..pairs).filter(|&k| lengths[k] < capacity).collect();
    for _ in pairs..n {
        let slot = rng.gen_range(0..open.len());
        let k = open[slot];
        lengths[k] += 1;
        if lengths[k] == capacity {
            open.swap_remove(slot);
        }
    }
    lengths
}

/// Keeps parent A's genes on the positions `[lo, hi)` and fills every other
/// position, left to right, with parent B's genes in B's order, skipping
/// nodes already taken. The child inherits A's segment lengths.
pub fn crossover_with_cuts(a: &Genotype, b: &Genotype, lo: usize, hi: usize) -> Genotype {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    let (lo, hi) = (lo.min(hi), lo.max(hi).min(n));
    let max_node = a.genes.iter().map(|g| g.node).max().unwrap_or(0);
    let mut taken = vec![false; max_node + 1];
    for gene in &a.genes[lo..hi] {
        taken[gene.node] = true;
    }
    let mut donors = b
        .genes
        .iter()
        .filter(|g| !taken.get(g.node).copied().unwrap_or(false));
    let mut genes = Vec::with_capacity(n);
    for pos in 0..n {
        if (lo..hi).contains(&pos) {
            genes.push(a.genes[pos]);
        } else if let Some(&gene) = donors.next() {
            genes.push(gene);
        }
    }
    Genotype::new(genes, a.segments.clone())
}

/// Crossover with two uniformly drawn cut indices in `[0, n)`.
pub fn crossover<R: Rng + ?Sized>(a: &Genotype, b: &Genotype, rng: &mut R) -> Genotype {
    let n = a.len();
    if n == 0 {
        return a.clone();
    }
    let first = rng.gen_range(0..n);
    let second = rng.gen_range(0..n);
    crossover_with_cuts(a, b, first, second)
}

/// Exchanges whole genes at positions `i` and `j`.
pub fn swap_genes(genotype: &mut Genotype, i: usize, j: usize) {
    genotype.genes.swap(i, j);
}

/// Each position, with probability `rate`, swaps its gene with another
/// uniformly chosen position. In drone mode each delivery tag is then
/// inverted with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(genotype: &Genotype, rate: f64, mode: Mode, rng: &mut R) -> Genotype {
    let mut out = genotype.clone();
    let n = out.len();
    if rate <= 0.0 {
        return out;
    }
    if n >= 2 {
        for i in 0..n {
            if rng.gen::<f64>() < rate {
                let mut other = rng.gen_range(0..n - 1);
                if other >= i {
                    other += 1;
                }
                swap_genes(&mut out, i, other);
            }
        }
    }
    if mode.uses_drones() {
        for gene in &mut out.genes {
            if rng.gen::<f64>() < rate {
                gene.delivery = gene.delivery.flipped();
            }
        }
    }
    out
}

/// Makes a genotype drone-feasible without touching the visit order:
/// scanning each segment left to right, the second of two consecutive
/// drone genes becomes a truck gene, and so does any drone gene whose
/// launch-to-customer leg exceeds the instance's drone range.
pub fn repair(genotype: &Genotype, instance: &Instance) -> Genotype {
    let mut out = genotype.clone();
    for range in out.segment_ranges() {
        for index in range.clone() {
            if !out.genes[index].is_drone() {
                continue;
            }
            if index > range.start && out.genes[index - 1].is_drone() {
                out.genes[index].delivery = Delivery::Truck;
                continue;
            }
            if let Some(limit) = instance.max_drone_distance {
                let launch = launch_node(&out, range.start, index);
                if instance.distance(launch, out.genes[index].node) > limit {
                    out.genes[index].delivery = Delivery::Truck;
                }
            }
        }
    }
    out
}

/// Forces every delivery onto the truck.
pub fn truck_only(genotype: &Genotype) -> Genotype {
    let mut out = genotype.clone();
    for gene in &mut out.genes {
        gene.delivery = Delivery::Truck;
    }
    out
}
