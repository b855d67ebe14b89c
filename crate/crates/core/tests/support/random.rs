use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vrpdi::{Delivery, Gene, Genotype, Instance, Point};

/// Instance with 1 to `max_customers` customers in a 100 x 100 square,
/// random speeds and, half of the time, random service times.
pub fn random_instance(rng: &mut ChaCha8Rng, max_customers: usize) -> Instance {
    let customers = rng.gen_range(1..=max_customers);
    let coords: Vec<Point> = (0..=customers)
        .map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let vt = rng.gen_range(0.5..2.0);
    let vd = rng.gen_range(0.3..4.0);
    let mut instance = Instance::from_coordinates("rand", &coords, vt, vd).unwrap();
    if rng.gen_bool(0.5) {
        instance.truck_delivery_time = rng.gen_range(0.0..5.0);
        instance.drone_delivery_time = rng.gen_range(0.0..5.0);
    }
    instance
}

/// Random visit order, up to three segments and drone tags that never
/// follow another drone inside a segment.
pub fn random_genotype(instance: &Instance, rng: &mut ChaCha8Rng) -> Genotype {
    let n = instance.customer_count();
    let mut order: Vec<usize> = instance.customers().collect();
    order.shuffle(rng);
    let pairs = rng.gen_range(1..=n.min(3));
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(pairs - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut segments = Vec::new();
    let mut prev = 0;
    for c in cuts {
        segments.push(c - prev);
        prev = c;
    }
    let mut genes = Vec::with_capacity(n);
    let mut start = 0;
    for &len in &segments {
        let mut previous_drone = false;
        for &node in &order[start..start + len] {
            let drone = !previous_drone && rng.gen_bool(0.5);
            genes.push(Gene {
                node,
                delivery: if drone { Delivery::Drone } else { Delivery::Truck },
            });
            previous_drone = drone;
        }
        start += len;
    }
    Genotype::new(genes, segments)
}
