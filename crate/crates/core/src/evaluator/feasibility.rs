use std::fmt;

use serde::{Deserialize, Serialize};

use super::genotype::{Delivery, Genotype};
use crate::model::Instance;

/// A broken VRPDi rule, located in the genotype.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// Customer visited `count` times instead of once.
    VisitOnce { node: usize, count: usize },
    /// Gene refers to the depot or to a node outside the instance.
    UnknownNode { index: usize, node: usize },
    /// Segment lengths do not add up to the number of genes.
    SegmentBounds { expected: usize, found: usize },
    /// Two drone deliveries with no truck delivery in between.
    ConsecutiveDrone { index: usize },
    /// A pair carries more demand than the truck capacity.
    Capacity { segment: usize, load: u64 },
    /// Launch-to-customer drone leg longer than the drone range.
    DroneRange { index: usize, distance: f64 },
}

impl Violation {
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::VisitOnce { .. } => "visit-once",
            Violation::UnknownNode { .. } => "unknown-node",
            Violation::SegmentBounds { .. } => "segment-bounds",
            Violation::ConsecutiveDrone { .. } => "consecutive-drone",
            Violation::Capacity { .. } => "capacity",
            Violation::DroneRange { .. } => "drone-range",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VisitOnce { node, count } => {
                write!(f, "customer {node} visited {count} times")
            }
            Violation::UnknownNode { index, node } => {
                write!(f, "gene {index} refers to invalid node {node}")
            }
            Violation::SegmentBounds { expected, found } => {
                write!(f, "segments cover {found} genes, expected {expected}")
            }
            Violation::ConsecutiveDrone { index } => {
                write!(f, "gene {index} is a second consecutive drone delivery")
            }
            Violation::Capacity { segment, load } => {
                write!(f, "pair {segment} carries load {load} above capacity")
            }
            Violation::DroneRange { index, distance } => {
                write!(f, "gene {index} drone leg of length {distance} exceeds range")
            }
        }
    }
}

/// Node from which the drone of gene `index` is launched: the preceding
/// gene of the same segment, or the depot at segment start.
pub(crate) fn launch_node(genotype: &Genotype, segment_start: usize, index: usize) -> usize {
    if index == segment_start {
        Instance::DEPOT
    } else {
        genotype.genes[index - 1].node
    }
}

/// Lists every rule the genotype breaks; empty means feasible.
pub fn check_feasibility(genotype: &Genotype, instance: &Instance) -> Vec<Violation> {
    let mut violations = Vec::new();
    let n = instance.nodes.len();

    let mut counts = vec![0usize; n];
    for (index, gene) in genotype.genes.iter().enumerate() {
        if gene.node == Instance::DEPOT || gene.node >= n {
            violations.push(Violation::UnknownNode {
                index,
                node: gene.node,
            });
        } else {
            counts[gene.node] += 1;
        }
    }
    for node in instance.customers() {
        if counts[node] != 1 {
            violations.push(Violation::VisitOnce {
                node,
                count: counts[node],
            });
        }
    }

    if !genotype.has_consistent_segments() {
        violations.push(Violation::SegmentBounds {
            expected: genotype.len(),
            found: genotype.segments.iter().sum(),
        });
        return violations;
    }

    for (k, range) in genotype.segment_ranges().into_iter().enumerate() {
        let load: u64 = genotype.genes[range.clone()]
            .iter()
            .filter(|g| g.node < n)
            .map(|g| u64::from(instance.nodes[g.node].demand))
            .sum();
        if load > u64::from(instance.capacity) {
            violations.push(Violation::Capacity { segment: k, load });
        }
        for index in range.clone() {
            let gene = genotype.genes[index];
            if gene.delivery != Delivery::Drone {
                continue;
            }
            if index > range.start && genotype.genes[index - 1].is_drone() {
                violations.push(Violation::ConsecutiveDrone { index });
                continue;
            }
            if let Some(limit) = instance.max_drone_distance {
                let launch = launch_node(genotype, range.start, index);
                if launch < n && gene.node < n {
                    let distance = instance.distance(launch, gene.node);
                    if distance > limit {
                        violations.push(Violation::DroneRange { index, distance });
                    }
                }
            }
        }
    }
    violations
}
