use vrpdi::{Delivery, Genotype, Instance, Point};

/// Makespan and truck distance found by stepping through each pair's
/// events directly: truck stops, drone drops and the moment both vehicles
/// are together again at the next stop.
pub fn simulate(genotype: &Genotype, instance: &Instance) -> (f64, f64) {
    let mut makespan = 0.0f64;
    let mut truck_distance = 0.0;
    let mut start = 0;
    for &len in &genotype.segments {
        let genes = &genotype.genes[start..start + len];
        start += len;
        let (done, dist) = simulate_pair(genes, instance);
        makespan = makespan.max(done);
        truck_distance += dist;
    }
    (makespan, truck_distance)
}

fn simulate_pair(genes: &[vrpdi::Gene], instance: &Instance) -> (f64, f64) {
    let pos = |n: usize| instance.position(n);
    let vt = instance.truck_speed;
    let vd = instance.drone_speed;
    let omega = instance.truck_delivery_time;
    let sigma = instance.drone_delivery_time;
    let mut clock = 0.0;
    let mut at = 0usize;
    let mut driven = 0.0;
    let mut k = 0;
    while k < genes.len() {
        let gene = genes[k];
        if gene.delivery == Delivery::Truck {
            driven += pos(at).distance(pos(gene.node));
            clock += pos(at).distance(pos(gene.node)) / vt + omega;
            at = gene.node;
            k += 1;
            continue;
        }
        let next = genes.get(k + 1).map_or(0, |g| g.node);
        let (from, to, customer) = (pos(at), pos(next), pos(gene.node));
        let free = clock + from.distance(customer) / vd + sigma;
        let truck_arrival = clock + from.distance(to) / vt;
        let drone_at_next = free + customer.distance(to) / vd;
        let together = if drone_at_next <= truck_arrival
            || catches_truck(customer, free, from, to, clock, truck_arrival, vd)
        {
            truck_arrival
        } else {
            drone_at_next
        };
        driven += from.distance(to);
        if next == 0 {
            return (together, driven);
        }
        clock = (truck_arrival + omega).max(together);
        at = next;
        k += 2;
    }
    driven += pos(at).distance(pos(0));
    (clock + pos(at).distance(pos(0)) / vt, driven)
}

/// Whether a drone leaving `customer` at `free` can reach the truck driving
/// `from -> to` (departing `depart`, arriving `arrive`) before it arrives.
fn catches_truck(
    customer: Point,
    free: f64,
    from: Point,
    to: Point,
    depart: f64,
    arrive: f64,
    vd: f64,
) -> bool {
    if free >= arrive {
        return false;
    }
    let truck_at = |s: f64| {
        let share = if arrive > depart {
            (s - depart) / (arrive - depart)
        } else {
            1.0
        };
        from + (to - from) * share
    };
    let gap = |s: f64| truck_at(s).distance(customer) - vd * (s - free);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (free, arrive);
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if gap(c) < gap(d) {
            b = d;
        } else {
            a = c;
        }
    }
    gap(0.5 * (a + b)) <= 1e-9 || gap(arrive) <= 1e-9
}
