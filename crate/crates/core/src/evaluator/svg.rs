//! SVG rendering of a decoded schedule: solid polylines for trucks, dashed
//! lines for drone flights, squares at interception points.

use std::fmt::Write as _;

use super::decode::{Actor, LegPurpose, Schedule};
use crate::model::{Instance, Point};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Frame {
    min: Point,
    scale: f64,
}

impl Frame {
    fn fit(instance: &Instance) -> Self {
        let (mut lo, mut hi) = (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for n in &instance.nodes {
            lo = Point::new(lo.x.min(n.x), lo.y.min(n.y));
            hi = Point::new(hi.x.max(n.x), hi.y.max(n.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Frame {
            min: lo,
            scale: (CANVAS - 2.0 * MARGIN) / span,
        }
    }

    // SVG y grows downward.
    fn map(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.min.x) * self.scale,
            CANVAS - MARGIN - (p.y - self.min.y) * self.scale,
        )
    }
}

pub fn render_svg(schedule: &Schedule, instance: &Instance) -> String {
    let frame = Frame::fit(instance);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<title>{} system time {:.2}</title>"#,
        escape(&instance.name),
        schedule.totals.system_time
    );

    for (k, pair) in schedule.pairs.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut points = Vec::new();
        for leg in pair.legs_of(Actor::Truck) {
            if points.is_empty() {
                points.push(frame.map(leg.from));
            }
            points.push(frame.map(leg.to));
        }
        let coords = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            r#"<polyline class="truck" data-pair="{k}" points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>"#
        );

        let _ = writeln!(
            out,
            r#"<g class="drone" data-pair="{k}" stroke="{color}" stroke-width="1.2" stroke-dasharray="4 3">"#
        );
        for leg in pair.legs_of(Actor::Drone) {
            if leg.purpose == LegPurpose::Carried {
                continue;
            }
            let (x1, y1) = frame.map(leg.from);
            let (x2, y2) = frame.map(leg.to);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
            );
        }
        let _ = writeln!(out, "</g>");
    }

    for node in &instance.nodes[1..] {
        let (x, y) = frame.map(node.position());
        let _ = writeln!(
            out,
            r#"<circle class="customer" data-node="{}" cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#,
            node.id
        );
    }
    let (dx, dy) = frame.map(instance.position(Instance::DEPOT));
    let _ = writeln!(
        out,
        r#"<polygon class="depot" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="black"/>"#,
        dx,
        dy - 7.0,
        dx - 6.0,
        dy + 5.0,
        dx + 6.0,
        dy + 5.0
    );
    for r in schedule.rendezvous() {
        let (x, y) = frame.map(r.point);
        let _ = writeln!(
            out,
            r#"<rect class="interception" x="{:.2}" y="{:.2}" width="6" height="6" fill="black"/>"#,
            x - 3.0,
            y - 3.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
