//! Truck-drone rendezvous kinematics.
//!
//! A drone that finished its delivery either flies to meet the truck on
//! the straight segment the truck is currently driving, or flies to the
//! truck's next stop and the two meet there.

use serde::{Deserialize, Serialize};

use crate::model::Point;

/// Absolute tolerance used for all time comparisons.
pub const TIME_EPS: f64 = 1e-9;

/// Snapshot of a truck moving at constant velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruckState {
    pub position: Point,
    pub velocity: Point,
    pub state_time: f64,
}

impl TruckState {
    pub fn parked(position: Point, state_time: f64) -> Self {
        TruckState {
            position,
            velocity: Point::ORIGIN,
            state_time,
        }
    }

    /// Truck leaving `from` for `to` at `speed`, starting at `state_time`.
    /// A zero-length segment yields a parked truck.
    pub fn heading(from: Point, to: Point, speed: f64, state_time: f64) -> Self {
        let delta = to - from;
        let len = delta.norm();
        if len == 0.0 {
            return TruckState::parked(from, state_time);
        }
        TruckState {
            position: from,
            velocity: delta * (speed / len),
            state_time,
        }
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    pub fn is_moving(&self) -> bool {
        self.velocity.x != 0.0 || self.velocity.y != 0.0
    }

    /// Position `elapsed` time units after the snapshot.
    pub fn advanced(&self, elapsed: f64) -> TruckState {
        TruckState {
            position: interception_point(self, elapsed),
            velocity: self.velocity,
            state_time: self.state_time + elapsed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RendezvousKind {
    EnRouteIntercept,
    MeetAtNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterceptionResult {
    pub kind: RendezvousKind,
    pub point: Point,
    /// Absolute time at which drone and truck are reunited.
    pub time: f64,
    pub truck_wait: f64,
    pub drone_wait: f64,
    /// Absolute time at which both vehicles are together at the truck's
    /// next stop, ready to continue.
    pub continue_time: f64,
    /// Distance the drone flies from its delivery point to the rendezvous.
    pub drone_distance: f64,
}

/// Earliest `t >= 0` at which a drone leaving `drone_pos` at the snapshot
/// time, flying straight at `drone_speed`, reaches the truck. Solves
/// `|p + v t - c| = v_d t`, i.e.
/// `(|v|^2 - v_d^2) t^2 + 2 ((p - c) . v) t + |p - c|^2 = 0`.
pub fn interception_time(drone_pos: Point, truck: &TruckState, drone_speed: f64) -> Option<f64> {
    let offset = truck.position - drone_pos;
    let c = offset.norm_squared();
    if c == 0.0 {
        return Some(0.0);
    }
    let v2 = truck.velocity.norm_squared();
    let d2 = drone_speed * drone_speed;
    let a = v2 - d2;
    let b = 2.0 * offset.dot(truck.velocity);

    if a.abs() <= 1e-12 * v2.max(d2) {
        // Equal speeds: the quadratic degenerates to b t + c = 0.
        if b < 0.0 {
            return Some(-c / b);
        }
        return None;
    }

    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    // Numerically stable pair of roots.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let root = if lo >= 0.0 {
        lo
    } else if hi >= 0.0 {
        hi
    } else {
        return None;
    };
    Some(polish_root(a, b, c, root))
}

/// One Newton step on the quadratic; keeps the root if the step would make
/// it negative or worse.
fn polish_root(a: f64, b: f64, c: f64, t: f64) -> f64 {
    let f = (a * t + b) * t + c;
    let df = 2.0 * a * t + b;
    if df == 0.0 {
        return t;
    }
    let next = t - f / df;
    let f_next = (a * next + b) * next + c;
    if next >= 0.0 && f_next.abs() <= f.abs() {
        next
    } else {
        t
    }
}

/// Truck position `elapsed` time units after the snapshot.
pub fn interception_point(truck: &TruckState, elapsed: f64) -> Point {
    truck.position + truck.velocity * elapsed
}

/// Decides how a drone that becomes free at `drone_pos` at absolute time
/// `drone_free_time` rejoins a truck driving toward `next_node`.
///
/// The truck snapshot may predate the drone's free time; the truck is
/// advanced along its segment (and parked at `next_node` once it gets
/// there). The en-route option is only valid when the meeting happens on
/// the segment. The option with the earlier `continue_time` wins; when
/// both tie, the one with the shorter drone flight wins, and remaining
/// ties go to meeting at the node.
pub fn resolve_rendezvous(
    drone_pos: Point,
    drone_free_time: f64,
    truck: &TruckState,
    next_node: Point,
    drone_speed: f64,
) -> InterceptionResult {
    let truck_arrival = if truck.is_moving() {
        truck.state_time + (next_node - truck.position).norm() / truck.speed()
    } else {
        truck.state_time
    };

    let to_node = (next_node - drone_pos).norm();
    let drone_arrival = drone_free_time + to_node / drone_speed;
    let meet = truck_arrival.max(drone_arrival);
    let at_node = InterceptionResult {
        kind: RendezvousKind::MeetAtNode,
        point: next_node,
        time: meet,
        truck_wait: (drone_arrival - truck_arrival).max(0.0),
        drone_wait: (truck_arrival - drone_arrival).max(0.0),
        continue_time: meet,
        drone_distance: to_node,
    };

    if !truck.is_moving() || drone_free_time >= truck_arrival - TIME_EPS {
        return at_node;
    }

    let current = truck.advanced(drone_free_time - truck.state_time);
    let Some(tau) = interception_time(drone_pos, &current, drone_speed) else {
        return at_node;
    };
    let intercept_time = drone_free_time + tau;
    if intercept_time > truck_arrival + TIME_EPS {
        return at_node;
    }
    let en_route = InterceptionResult {
        kind: RendezvousKind::EnRouteIntercept,
        point: interception_point(&current, tau),
        time: intercept_time,
        truck_wait: 0.0,
        drone_wait: 0.0,
        continue_time: truck_arrival,
        drone_distance: drone_speed * tau,
    };

    let better_time = en_route.continue_time < at_node.continue_time - TIME_EPS;
    let tied_time = (en_route.continue_time - at_node.continue_time).abs() <= TIME_EPS;
    let shorter_flight = en_route.drone_distance < at_node.drone_distance - TIME_EPS;
    if better_time || (tied_time && shorter_flight) {
        en_route
    } else {
        at_node
    }
}
