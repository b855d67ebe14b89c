use vrpdi::geometry::TruckState;
use vrpdi::Point;

/// Gap between the drone's reach and the truck after `t`: positive while
/// the truck is still out of reach. Convex in `t`. Evaluated as a
/// difference of squares over a sum to stay accurate for long chases.
pub fn gap(drone: Point, truck: &TruckState, vd: f64, t: f64) -> f64 {
    let q = truck.position - drone;
    let v = truck.velocity;
    let squares = q.norm_squared() + 2.0 * q.dot(v) * t + (v.norm_squared() - vd * vd) * t * t;
    let sum = (q + v * t).norm() + vd * t;
    if sum == 0.0 {
        0.0
    } else {
        squares / sum
    }
}

/// Earliest root of the gap found by bracketing the minimum of the convex
/// gap with golden-section search and bisecting on its left side.
pub fn bisection_oracle(drone: Point, truck: &TruckState, vd: f64) -> Option<f64> {
    let f = |t: f64| gap(drone, truck, vd, t);
    if f(0.0) == 0.0 {
        return Some(0.0);
    }
    let mut hi = 1.0;
    for _ in 0..200 {
        if f(hi) <= 0.0 || f(2.0 * hi) >= f(hi) {
            break;
        }
        hi *= 2.0;
    }
    let mut right = 2.0 * hi;
    if f(hi) > 0.0 {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0, right);
        for _ in 0..300 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let t_min = 0.5 * (a + b);
        if f(t_min) > 1e-12 {
            return None;
        }
        right = t_min;
    } else {
        right = hi;
    }
    let (mut lo, mut hi) = (0.0, right);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}
