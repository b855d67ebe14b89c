use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Delivery {
    Truck,
    Drone,
}

impl Delivery {
    pub fn flipped(self) -> Self {
        match self {
            Delivery::Truck => Delivery::Drone,
            Delivery::Drone => Delivery::Truck,
        }
    }
}

/// One customer visit and the vehicle that serves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gene {
    pub node: usize,
    pub delivery: Delivery,
}

impl Gene {
    pub fn truck(node: usize) -> Self {
        Gene {
            node,
            delivery: Delivery::Truck,
        }
    }

    pub fn drone(node: usize) -> Self {
        Gene {
            node,
            delivery: Delivery::Drone,
        }
    }

    pub fn is_drone(&self) -> bool {
        self.delivery == Delivery::Drone
    }
}

/// Metameric chromosome: the visit sequence with delivery tags, cut into
/// one contiguous segment per truck-drone pair. Segment `k` is served by
/// pair `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Genotype {
    pub genes: Vec<Gene>,
    /// Length of each segment; the lengths sum to `genes.len()`.
    pub segments: Vec<usize>,
}

impl Genotype {
    pub fn new(genes: Vec<Gene>, segments: Vec<usize>) -> Self {
        Genotype { genes, segments }
    }

    /// Single-pair genotype.
    pub fn single(genes: Vec<Gene>) -> Self {
        let len = genes.len();
        Genotype {
            genes,
            segments: vec![len],
        }
    }

    /// All-truck genotype visiting `order` with one segment.
    pub fn all_truck(order: &[usize]) -> Self {
        Genotype::single(order.iter().map(|&n| Gene::truck(n)).collect())
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn pair_count(&self) -> usize {
        self.segments.len()
    }

    /// Gene-index ranges of each segment, in pair order.
    pub fn segment_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.segments
            .iter()
            .map(|&len| {
                let range = start..start + len;
                start += len;
                range
            })
            .collect()
    }

    pub fn segment_slices(&self) -> impl Iterator<Item = &[Gene]> {
        self.segment_ranges().into_iter().map(move |r| &self.genes[r])
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.genes.iter().map(|g| g.node).collect()
    }

    pub fn drone_count(&self) -> usize {
        self.genes.iter().filter(|g| g.is_drone()).count()
    }

    /// Segment lengths summing to the gene count. Does not check nodes.
    pub fn has_consistent_segments(&self) -> bool {
        self.segments.iter().sum::<usize>() == self.genes.len()
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, segment) in self.segment_slices().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            for (i, gene) in segment.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                let tag = match gene.delivery {
                    Delivery::Truck => 'T',
                    Delivery::Drone => 'D',
                };
                write!(f, "{}{}", gene.node, tag)?;
            }
        }
        Ok(())
    }
}
