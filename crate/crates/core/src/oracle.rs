//! Exhaustive search over every feasible genotype of a tiny instance.

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::Mode;
use crate::evaluator::{evaluate, Delivery, Gene, Genotype};
use crate::model::Instance;

/// Largest search space the oracle agrees to walk.
pub const MAX_SEARCH_SPACE: u128 = 40_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of {size} genotypes exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("cannot split {customers} customers over {pairs} pairs of capacity {capacity}")]
    Fleet {
        customers: usize,
        pairs: usize,
        capacity: u32,
    },
    #[error("no feasible genotype exists")]
    NoFeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub genotype: Genotype,
    pub objective: f64,
    /// Number of feasible genotypes evaluated.
    pub evaluated: u64,
}

/// Segment-length vectors with `pairs` parts in `1..=capacity` summing to
/// `n`, in lexicographic order.
pub fn compositions(n: usize, pairs: usize, capacity: usize) -> Vec<Vec<usize>> {
    fn walk(left: usize, parts: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let min_rest = parts - 1;
        let max_rest = (parts - 1) * cap;
        for len in 1..=cap.min(left) {
            let rest = left - len;
            if rest < min_rest || rest > max_rest {
                continue;
            }
            prefix.push(len);
            walk(rest, parts - 1, cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(n, pairs, capacity, &mut Vec::new(), &mut out);
    out
}

/// Delivery-tag masks (bit `n-1-i` set = gene `i` is a drone) with no two
/// drones adjacent inside a segment, in lexicographic order.
fn tag_masks(segments: &[usize], mode: Mode) -> Vec<u32> {
    let n: usize = segments.iter().sum();
    if mode == Mode::Vrp {
        return vec![0];
    }
    let mut boundary = vec![false; n];
    let mut pos = 0;
    for &len in segments {
        pos += len;
        if pos < n {
            boundary[pos] = true;
        }
    }
    (0u32..(1u32 << n))
        .filter(|&mask| {
            (1..n).all(|i| {
                let prev = mask >> (n - i) & 1 == 1;
                let cur = mask >> (n - 1 - i) & 1 == 1;
                !(prev && cur) || boundary[i]
            })
        })
        .collect()
}

fn fibonacci(k: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

/// Exact number of genotypes the oracle would enumerate.
pub fn search_space_size(customers: usize, pairs: usize, capacity: usize, mode: Mode) -> u128 {
    let perms: u128 = (1..=customers as u128).product();
    let per_order: u128 = compositions(customers, pairs, capacity)
        .iter()
        .map(|seg| match mode {
            Mode::Vrp => 1,
            Mode::Vrpdi => seg.iter().map(|&l| fibonacci(l + 2)).product(),
        })
        .sum();
    perms * per_order
}

/// Next lexicographic permutation in place; false when `v` was the last.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

struct Space {
    segments: Vec<(Vec<usize>, Vec<u32>)>,
    customers: Vec<usize>,
}

fn prepare(instance: &Instance, pairs: usize, mode: Mode) -> Result<Space, OracleError> {
    let n = instance.customer_count();
    let capacity = instance.capacity as usize;
    if pairs == 0 || pairs > n || n > pairs * capacity {
        return Err(OracleError::Fleet {
            customers: n,
            pairs,
            capacity: instance.capacity,
        });
    }
    let size = search_space_size(n, pairs, capacity, mode);
    if size > MAX_SEARCH_SPACE || n > 31 {
        return Err(OracleError::TooLarge {
            size,
            limit: MAX_SEARCH_SPACE,
        });
    }
    let segments = compositions(n, pairs, capacity)
        .into_iter()
        .map(|seg| {
            let masks = tag_masks(&seg, mode);
            (seg, masks)
        })
        .collect();
    Ok(Space {
        segments,
        customers: instance.customers().collect(),
    })
}

/// Visits every genotype whose visit order starts with `first`, in
/// lexicographic order.
fn for_each_with_first(space: &Space, first: usize, mut visit: impl FnMut(&Genotype)) {
    let n = space.customers.len();
    let mut rest: Vec<usize> = space.customers.iter().copied().filter(|&c| c != first).collect();
    let mut genotype = Genotype::new(vec![Gene::truck(first); n], Vec::new());
    loop {
        for (segments, masks) in &space.segments {
            genotype.segments.clone_from(segments);
            for &mask in masks {
                for (i, gene) in genotype.genes.iter_mut().enumerate() {
                    gene.node = if i == 0 { first } else { rest[i - 1] };
                    gene.delivery = if mask >> (n - 1 - i) & 1 == 1 {
                        Delivery::Drone
                    } else {
                        Delivery::Truck
                    };
                }
                visit(&genotype);
            }
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
}

/// Global minimiser of the makespan over every feasible genotype. Ties go
/// to the first genotype in enumeration order: visit order
/// lexicographically, then segment lengths, then delivery tags.
pub fn enumerate_optimum(
    instance: &Instance,
    pair_count: usize,
    mode: Mode,
) -> Result<OracleResult, OracleError> {
    let space = prepare(instance, pair_count, mode)?;
    let per_first: Vec<Option<OracleResult>> = space
        .customers
        .par_iter()
        .map(|&first| {
            let mut best: Option<OracleResult> = None;
            let mut evaluated = 0u64;
            for_each_with_first(&space, first, |g| {
                if let Ok(totals) = evaluate(g, instance) {
                    evaluated += 1;
                    if best.as_ref().is_none_or(|b| totals.system_time < b.objective) {
                        best = Some(OracleResult {
                            genotype: g.clone(),
                            objective: totals.system_time,
                            evaluated: 0,
                        });
                    }
                }
            });
            best.map(|b| OracleResult { evaluated, ..b })
        })
        .collect();

    let evaluated = per_first.iter().flatten().map(|r| r.evaluated).sum();
    let mut winner: Option<OracleResult> = None;
    for candidate in per_first.into_iter().flatten() {
        if winner.as_ref().is_none_or(|w| candidate.objective < w.objective) {
            winner = Some(candidate);
        }
    }
    winner
        .map(|w| OracleResult { evaluated, ..w })
        .ok_or(OracleError::NoFeasible)
}

/// Every feasible genotype with its objective, in enumeration order.
pub fn enumerate_all(
    instance: &Instance,
    pair_count: usize,
    mode: Mode,
) -> Result<Vec<(Genotype, f64)>, OracleError> {
    let space = prepare(instance, pair_count, mode)?;
    let mut all = Vec::new();
    for &first in &space.customers {
        for_each_with_first(&space, first, |g| {
            if let Ok(totals) = evaluate(g, instance) {
                all.push((g.clone(), totals.system_time));
            }
        });
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;

    fn inst(coords: &[(f64, f64)], vt: f64, vd: f64) -> Instance {
        let pts: Vec<Point> = coords.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Instance::from_coordinates("o", &pts, vt, vd).unwrap()
    }

    #[test]
    fn one_customer_closed_form() {
        let mut i = inst(&[(0.0, 0.0), (6.0, 8.0)], 2.0, 3.0);
        i.truck_delivery_time = 0.5;
        let r = enumerate_optimum(&i, 1, Mode::Vrp).unwrap();
        assert_eq!(r.objective, 2.0 * 10.0 / 2.0 + 0.5);
        assert_eq!(r.evaluated, 1);
    }

    #[test]
    fn three_on_a_line() {
        // Hand enumeration of the 6 orders of customers at x = 1, 2, 4 with
        // the depot at x = 0: orders that rise then fall cost 8 (twice the
        // farthest point), [2,1,3] and [3,1,2] backtrack and cost 10.
        let i = inst(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (4.0, 0.0)], 1.0, 2.0);
        let all = enumerate_all(&i, 1, Mode::Vrp).unwrap();
        let costs: Vec<f64> = all.iter().map(|(_, c)| *c).collect();
        assert_eq!(costs, vec![8.0, 8.0, 10.0, 8.0, 10.0, 8.0]);
        let r = enumerate_optimum(&i, 1, Mode::Vrp).unwrap();
        assert_eq!(r.objective, 8.0);
        assert_eq!(r.genotype.nodes(), vec![1, 2, 3]);
    }

    #[test]
    fn counts_match_size_formula() {
        let i = inst(
            &[(0.0, 0.0), (1.0, 2.0), (3.0, -1.0), (-2.0, 2.0), (0.5, -3.0)],
            1.0,
            2.0,
        );
        for (pairs, mode) in [(1, Mode::Vrp), (1, Mode::Vrpdi), (2, Mode::Vrpdi), (3, Mode::Vrp)] {
            let all = enumerate_all(&i, pairs, mode).unwrap();
            assert_eq!(all.len() as u128, search_space_size(4, pairs, 40, mode));
        }
        // 4! orders times F(6) = 8 tag patterns.
        assert_eq!(search_space_size(4, 1, 40, Mode::Vrpdi), 24 * 8);
    }

    #[test]
    fn optimum_bounds_everything_enumerated() {
        let i = inst(
            &[(0.0, 0.0), (4.0, 1.0), (-3.0, 2.0), (1.0, -5.0), (2.5, 3.5)],
            1.0,
            1.7,
        );
        let all = enumerate_all(&i, 2, Mode::Vrpdi).unwrap();
        let r = enumerate_optimum(&i, 2, Mode::Vrpdi).unwrap();
        assert!(all.iter().all(|(_, c)| r.objective <= *c));
        let first_best = all.iter().find(|(_, c)| *c == r.objective).unwrap();
        assert_eq!(first_best.0, r.genotype);
    }

    #[test]
    fn drones_never_hurt_the_optimum() {
        let i = inst(
            &[
                (0.0, 0.0),
                (4.0, 1.0),
                (-3.0, 2.0),
                (1.0, -5.0),
                (2.5, 3.5),
                (-1.0, -1.0),
            ],
            1.0,
            2.0,
        );
        let vrp = enumerate_optimum(&i, 1, Mode::Vrp).unwrap();
        let vrpdi = enumerate_optimum(&i, 1, Mode::Vrpdi).unwrap();
        assert!(vrpdi.objective <= vrp.objective);
    }

    #[test]
    fn refuses_large_instances() {
        let coords: Vec<(f64, f64)> = (0..=11).map(|k| (k as f64, (k * k) as f64)).collect();
        let i = inst(&coords, 1.0, 2.0);
        match enumerate_optimum(&i, 1, Mode::Vrpdi) {
            Err(OracleError::TooLarge { size, .. }) => {
                assert_eq!(size, 39_916_800 * fibonacci(13));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn composition_listing() {
        assert_eq!(compositions(4, 2, 40), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(4, 2, 2), vec![vec![2, 2]]);
        assert!(compositions(5, 2, 2).is_empty());
    }
}
