use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::genotype::{Delivery, Gene, Genotype};
use crate::geometry::{resolve_rendezvous, RendezvousKind, TruckState};
use crate::model::{Instance, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("segments cover {found} genes but the genotype has {expected}")]
    SegmentBounds { expected: usize, found: usize },
    #[error("gene {index} refers to invalid node {node}")]
    InvalidNode { index: usize, node: usize },
    #[error("gene {index} is a second consecutive drone delivery")]
    ConsecutiveDrone { index: usize },
    #[error("gene {index}: drone leg of length {distance} exceeds range {limit}")]
    DroneRange { index: usize, distance: f64, limit: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Actor {
    Truck,
    Drone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LegPurpose {
    Delivery,
    Interception,
    ReturnToDepot,
    /// Drone riding on its truck.
    Carried,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub actor: Actor,
    pub from: Point,
    pub to: Point,
    /// Customer or depot at the end of the leg; `None` for a mid-segment
    /// interception point.
    pub to_node: Option<usize>,
    pub depart: f64,
    pub arrive: f64,
    pub purpose: LegPurpose,
}

impl Leg {
    pub fn length(&self) -> f64 {
        (self.to - self.from).norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rendezvous {
    /// Index of the drone gene whose sortie ends here.
    pub gene_index: usize,
    pub kind: RendezvousKind,
    pub point: Point,
    pub time: f64,
    pub truck_wait: f64,
    pub drone_wait: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSchedule {
    pub legs: Vec<Leg>,
    pub rendezvous: Vec<Rendezvous>,
    pub completion: f64,
    pub truck_distance: f64,
    pub drone_distance: f64,
}

impl PairSchedule {
    pub fn legs_of(&self, actor: Actor) -> impl Iterator<Item = &Leg> {
        self.legs.iter().filter(move |l| l.actor == actor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Totals {
    /// Completion time of the slowest pair.
    pub system_time: f64,
    pub truck_distance: f64,
    pub drone_distance: f64,
}

/// Timed phenotype of a genotype.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub pairs: Vec<PairSchedule>,
    pub totals: Totals,
}

impl Schedule {
    pub fn system_time(&self) -> f64 {
        self.totals.system_time
    }

    pub fn rendezvous(&self) -> impl Iterator<Item = &Rendezvous> {
        self.pairs.iter().flat_map(|p| p.rendezvous.iter())
    }
}

/// Receives the legs of one pair as the simulation produces them.
trait Recorder {
    fn leg(&mut self, leg: Leg);
    fn rendezvous(&mut self, rendezvous: Rendezvous);
}

struct NoRecord;

impl Recorder for NoRecord {
    #[inline]
    fn leg(&mut self, _: Leg) {}
    #[inline]
    fn rendezvous(&mut self, _: Rendezvous) {}
}

#[derive(Default)]
struct PairRecorder {
    legs: Vec<Leg>,
    rendezvous: Vec<Rendezvous>,
}

impl Recorder for PairRecorder {
    fn leg(&mut self, leg: Leg) {
        self.legs.push(leg);
    }
    fn rendezvous(&mut self, rendezvous: Rendezvous) {
        self.rendezvous.push(rendezvous);
    }
}

struct PairOutcome {
    completion: f64,
    truck_distance: f64,
    drone_distance: f64,
}

fn check_structure(genotype: &Genotype, instance: &Instance) -> Result<(), DecodeError> {
    if !genotype.has_consistent_segments() {
        return Err(DecodeError::SegmentBounds {
            expected: genotype.len(),
            found: genotype.segments.iter().sum(),
        });
    }
    let n = instance.nodes.len();
    for (index, gene) in genotype.genes.iter().enumerate() {
        if gene.node == Instance::DEPOT || gene.node >= n {
            return Err(DecodeError::InvalidNode {
                index,
                node: gene.node,
            });
        }
    }
    Ok(())
}

/// Simulates one truck-drone pair from the depot and back.
fn simulate_pair<R: Recorder>(
    genes: &[Gene],
    offset: usize,
    instance: &Instance,
    rec: &mut R,
) -> Result<PairOutcome, DecodeError> {
    let vt = instance.truck_speed;
    let vd = instance.drone_speed;
    let omega = instance.truck_delivery_time;
    let sigma = instance.drone_delivery_time;
    let depot = Instance::DEPOT;

    let mut out = PairOutcome {
        completion: 0.0,
        truck_distance: 0.0,
        drone_distance: 0.0,
    };
    if genes.is_empty() {
        return Ok(out);
    }

    let mut current = depot;
    let mut clock = 0.0;
    let mut i = 0;
    while i < genes.len() {
        let gene = genes[i];
        let here = instance.position(current);
        match gene.delivery {
            Delivery::Truck => {
                let target = instance.position(gene.node);
                let d = instance.distance(current, gene.node);
                let arrive = clock + d / vt;
                for actor in [Actor::Truck, Actor::Drone] {
                    rec.leg(Leg {
                        actor,
                        from: here,
                        to: target,
                        to_node: Some(gene.node),
                        depart: clock,
                        arrive,
                        purpose: if actor == Actor::Truck {
                            LegPurpose::Delivery
                        } else {
                            LegPurpose::Carried
                        },
                    });
                }
                out.truck_distance += d;
                clock = arrive + omega;
                current = gene.node;
                i += 1;
            }
            Delivery::Drone => {
                if genes.get(i + 1).is_some_and(Gene::is_drone) {
                    return Err(DecodeError::ConsecutiveDrone {
                        index: offset + i + 1,
                    });
                }
                let customer = instance.position(gene.node);
                let outbound = instance.distance(current, gene.node);
                if let Some(limit) = instance.max_drone_distance {
                    if outbound > limit {
                        return Err(DecodeError::DroneRange {
                            index: offset + i,
                            distance: outbound,
                            limit,
                        });
                    }
                }
                let drop_time = clock + outbound / vd;
                let free = drop_time + sigma;
                let next = genes.get(i + 1).map_or(depot, |g| g.node);
                let next_pos = instance.position(next);
                let truck_leg = instance.distance(current, next);
                let truck_arrival = clock + truck_leg / vt;
                let truck = TruckState::heading(here, next_pos, vt, clock);
                let r = resolve_rendezvous(customer, free, &truck, next_pos, vd);

                let truck_purpose = if next == depot {
                    LegPurpose::ReturnToDepot
                } else {
                    LegPurpose::Delivery
                };
                if current != next {
                    rec.leg(Leg {
                        actor: Actor::Truck,
                        from: here,
                        to: next_pos,
                        to_node: Some(next),
                        depart: clock,
                        arrive: truck_arrival,
                        purpose: truck_purpose,
                    });
                }
                rec.leg(Leg {
                    actor: Actor::Drone,
                    from: here,
                    to: customer,
                    to_node: Some(gene.node),
                    depart: clock,
                    arrive: drop_time,
                    purpose: LegPurpose::Delivery,
                });
                let en_route = r.kind == RendezvousKind::EnRouteIntercept;
                rec.leg(Leg {
                    actor: Actor::Drone,
                    from: customer,
                    to: r.point,
                    to_node: if en_route { None } else { Some(next) },
                    depart: free,
                    arrive: free + r.drone_distance / vd,
                    purpose: if !en_route && next == depot {
                        LegPurpose::ReturnToDepot
                    } else {
                        LegPurpose::Interception
                    },
                });
                if en_route {
                    rec.leg(Leg {
                        actor: Actor::Drone,
                        from: r.point,
                        to: next_pos,
                        to_node: Some(next),
                        depart: r.time,
                        arrive: truck_arrival,
                        purpose: LegPurpose::Carried,
                    });
                }
                rec.rendezvous(Rendezvous {
                    gene_index: offset + i,
                    kind: r.kind,
                    point: r.point,
                    time: r.time,
                    truck_wait: r.truck_wait,
                    drone_wait: r.drone_wait,
                });

                out.truck_distance += truck_leg;
                out.drone_distance += outbound + r.drone_distance;
                if next == depot {
                    out.completion = r.continue_time;
                    return Ok(out);
                }
                clock = (truck_arrival + omega).max(r.continue_time);
                current = next;
                i += 2;
            }
        }
    }

    let d = instance.distance(current, depot);
    let arrive = clock + d / vt;
    let here = instance.position(current);
    let home = instance.position(depot);
    for actor in [Actor::Truck, Actor::Drone] {
        rec.leg(Leg {
            actor,
            from: here,
            to: home,
            to_node: Some(depot),
            depart: clock,
            arrive,
            purpose: if actor == Actor::Truck {
                LegPurpose::ReturnToDepot
            } else {
                LegPurpose::Carried
            },
        });
    }
    out.truck_distance += d;
    out.completion = arrive;
    Ok(out)
}

/// Objective and distances without building the leg list.
pub fn evaluate(genotype: &Genotype, instance: &Instance) -> Result<Totals, DecodeError> {
    check_structure(genotype, instance)?;
    let mut totals = Totals::default();
    for (range, genes) in genotype
        .segment_ranges()
        .into_iter()
        .zip(genotype.segment_slices())
    {
        let pair = simulate_pair(genes, range.start, instance, &mut NoRecord)?;
        totals.system_time = totals.system_time.max(pair.completion);
        totals.truck_distance += pair.truck_distance;
        totals.drone_distance += pair.drone_distance;
    }
    Ok(totals)
}

/// Decodes a genotype into its timed schedule. Every pair leaves the depot
/// at time zero with its drone on board; a drone gene launches from the
/// truck's current stop while the truck drives on to the next truck gene
/// (or back to the depot when the drone gene ends the segment).
pub fn decode(genotype: &Genotype, instance: &Instance) -> Result<Schedule, DecodeError> {
    check_structure(genotype, instance)?;
    let mut pairs = Vec::with_capacity(genotype.pair_count());
    let mut totals = Totals::default();
    for (range, genes) in genotype
        .segment_ranges()
        .into_iter()
        .zip(genotype.segment_slices())
    {
        let mut rec = PairRecorder::default();
        let pair = simulate_pair(genes, range.start, instance, &mut rec)?;
        totals.system_time = totals.system_time.max(pair.completion);
        totals.truck_distance += pair.truck_distance;
        totals.drone_distance += pair.drone_distance;
        pairs.push(PairSchedule {
            legs: rec.legs,
            rendezvous: rec.rendezvous,
            completion: pair.completion,
            truck_distance: pair.truck_distance,
            drone_distance: pair.drone_distance,
        });
    }
    Ok(Schedule { pairs, totals })
}

pub fn objective(schedule: &Schedule) -> f64 {
    schedule.totals.system_time
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("times must be positive, got vrp={vrp_time} vrpdi={vrpdi_time}")]
pub struct ImprovementError {
    pub vrp_time: f64,
    pub vrpdi_time: f64,
}

/// Relative gain of the drone-assisted time over the truck-only time, in
/// percent of the drone-assisted time.
pub fn improvement(vrp_time: f64, vrpdi_time: f64) -> Result<f64, ImprovementError> {
    if !(vrp_time > 0.0 && vrpdi_time > 0.0) {
        return Err(ImprovementError { vrp_time, vrpdi_time });
    }
    Ok((vrp_time - vrpdi_time) / vrpdi_time * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(coords: &[(f64, f64)], vt: f64, vd: f64) -> Instance {
        let pts: Vec<Point> = coords.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Instance::from_coordinates("t", &pts, vt, vd).unwrap()
    }

    #[test]
    fn single_truck_out_and_back() {
        let inst = instance(&[(0.0, 0.0), (3.0, 4.0)], 1.0, 2.0);
        let s = decode(&Genotype::all_truck(&[1]), &inst).unwrap();
        assert_eq!(objective(&s), 10.0);
        assert_eq!(s.totals.truck_distance, 10.0);
        assert_eq!(s.totals.drone_distance, 0.0);
    }

    #[test]
    fn drone_then_truck_intercepts_en_route() {
        // Frozen from the discrete-event oracle in tests/decode_oracle.rs:
        // drone reaches (0,3) at 1.5, catches the truck at (4,0) at t=4,
        // truck reaches (10,0) at 10 and the depot at 20.
        let inst = instance(&[(0.0, 0.0), (0.0, 3.0), (10.0, 0.0)], 1.0, 2.0);
        let g = Genotype::single(vec![Gene::drone(1), Gene::truck(2)]);
        let s = decode(&g, &inst).unwrap();
        assert!((objective(&s) - 20.0).abs() < 1e-9);
        let r = &s.pairs[0].rendezvous[0];
        assert_eq!(r.kind, RendezvousKind::EnRouteIntercept);
        assert!((r.time - 4.0).abs() < 1e-9);
        assert!((r.point.x - 4.0).abs() < 1e-9 && r.point.y.abs() < 1e-9);
        assert!((s.totals.truck_distance - 20.0).abs() < 1e-12);
        assert!((s.totals.drone_distance - 8.0).abs() < 1e-9);
    }

    #[test]
    fn truck_only_has_no_drone_distance() {
        let inst = instance(&[(0.0, 0.0), (1.0, 5.0), (-2.0, 3.0), (4.0, 4.0)], 1.0, 3.0);
        let g = Genotype::all_truck(&[2, 3, 1]);
        assert_eq!(decode(&g, &inst).unwrap().totals.drone_distance, 0.0);
    }

    #[test]
    fn consecutive_drones_rejected() {
        let inst = instance(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], 1.0, 2.0);
        let g = Genotype::single(vec![Gene::truck(1), Gene::drone(2), Gene::drone(3)]);
        assert_eq!(decode(&g, &inst), Err(DecodeError::ConsecutiveDrone { index: 2 }));
    }

    #[test]
    fn drone_range_rejected() {
        let mut inst = instance(&[(0.0, 0.0), (1.0, 0.0), (0.0, 9.0)], 1.0, 2.0);
        inst.max_drone_distance = Some(5.0);
        let g = Genotype::single(vec![Gene::truck(1), Gene::drone(2)]);
        assert!(matches!(
            decode(&g, &inst),
            Err(DecodeError::DroneRange { index: 1, .. })
        ));
    }

    #[test]
    fn trailing_drone_returns_to_depot() {
        // Truck serves (4,0) then heads home; drone launched at (4,0)
        // serves (4,3) and flies back to the depot.
        let inst = instance(&[(0.0, 0.0), (4.0, 0.0), (4.0, 3.0)], 1.0, 1.0);
        let g = Genotype::single(vec![Gene::truck(1), Gene::drone(2)]);
        let s = decode(&g, &inst).unwrap();
        // Drone: 3 out, then 5 to depot => free at 7, home at 12; truck home at 8.
        assert!((objective(&s) - 12.0).abs() < 1e-9);
        let r = &s.pairs[0].rendezvous[0];
        assert_eq!(r.kind, RendezvousKind::MeetAtNode);
        assert!((r.truck_wait - 4.0).abs() < 1e-9);
    }

    #[test]
    fn lone_drone_segment_from_depot() {
        let inst = instance(&[(0.0, 0.0), (0.0, 6.0)], 1.0, 2.0);
        let g = Genotype::single(vec![Gene::drone(1)]);
        let s = decode(&g, &inst).unwrap();
        assert!((objective(&s) - 6.0).abs() < 1e-12);
        assert_eq!(s.totals.truck_distance, 0.0);
        assert!(s.pairs[0].legs_of(Actor::Truck).next().is_none());
    }

    #[test]
    fn makespan_over_pairs_and_service_times() {
        let mut inst = instance(&[(0.0, 0.0), (2.0, 0.0), (0.0, 5.0)], 1.0, 2.0);
        inst.truck_delivery_time = 1.0;
        let g = Genotype::new(vec![Gene::truck(1), Gene::truck(2)], vec![1, 1]);
        let s = decode(&g, &inst).unwrap();
        assert_eq!(s.pairs[0].completion, 5.0);
        assert_eq!(s.pairs[1].completion, 11.0);
        assert_eq!(objective(&s), 11.0);
        assert_eq!(evaluate(&g, &inst).unwrap(), s.totals);
    }

    #[test]
    fn improvement_examples() {
        assert_eq!(format!("{:.2}", improvement(58.61, 37.63).unwrap()), "55.75");
        assert_eq!(format!("{:.2}", improvement(60.46, 43.19).unwrap()), "39.99");
        assert_eq!(improvement(12.5, 12.5).unwrap(), 0.0);
        assert!(improvement(0.0, 1.0).is_err());
        assert!(improvement(1.0, -1.0).is_err());
    }
}
