//! Problem instances: nodes, speeds, service times, capacity and the
//! TSP-D text format they are loaded from.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Capacity used when an instance has at most this many customers.
pub const SMALL_INSTANCE_CUSTOMERS: usize = 100;
pub const SMALL_INSTANCE_CAPACITY: u32 = 40;
pub const LARGE_INSTANCE_CAPACITY: u32 = 100;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: malformed numeric token `{token}`")]
    Malformed { line: usize, token: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("instance declares {expected} locations but only {found} coordinate lines were found")]
    Truncated { expected: usize, found: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("total demand is zero")]
    ZeroDemand,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A point (or a vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, other: Point) -> f64 {
        euclidean_distance(self, other)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

pub fn euclidean_distance(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub demand: u32,
}

impl Node {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Immutable description of one routing problem. Node 0 is the depot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub nodes: Vec<Node>,
    pub truck_speed: f64,
    pub drone_speed: f64,
    /// Service time of a truck delivery, identical for every customer.
    pub truck_delivery_time: f64,
    /// Service time of a drone airdrop, identical for every customer.
    pub drone_delivery_time: f64,
    pub capacity: u32,
    pub max_drone_distance: Option<f64>,
}

impl Instance {
    pub const DEPOT: usize = 0;

    /// Builds an instance from raw coordinates (depot first), assigning unit
    /// demand to every customer and the default capacity rule.
    pub fn from_coordinates(
        name: impl Into<String>,
        coords: &[Point],
        truck_speed: f64,
        drone_speed: f64,
    ) -> Result<Self, ModelError> {
        let nodes = coords
            .iter()
            .enumerate()
            .map(|(id, p)| Node {
                id,
                x: p.x,
                y: p.y,
                demand: u32::from(id != 0),
            })
            .collect::<Vec<_>>();
        let customers = nodes.len().saturating_sub(1);
        let instance = Instance {
            name: name.into(),
            nodes,
            truck_speed,
            drone_speed,
            truck_delivery_time: 0.0,
            drone_delivery_time: 0.0,
            capacity: default_capacity(customers),
            max_drone_distance: None,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let invalid = |msg: String| Err(ModelError::Invalid(msg));
        if self.nodes.len() < 2 {
            return invalid("at least one customer is required".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return invalid(format!("node at position {i} has id {}", node.id));
            }
            if !node.x.is_finite() || !node.y.is_finite() {
                return invalid(format!("node {i} has non-finite coordinates"));
            }
        }
        if self.nodes[0].demand != 0 {
            return invalid("depot demand must be zero".into());
        }
        if !(self.truck_speed > 0.0 && self.truck_speed.is_finite()) {
            return invalid(format!("truck speed must be positive, got {}", self.truck_speed));
        }
        if !(self.drone_speed > 0.0 && self.drone_speed.is_finite()) {
            return invalid(format!("drone speed must be positive, got {}", self.drone_speed));
        }
        if !(self.truck_delivery_time >= 0.0 && self.drone_delivery_time >= 0.0) {
            return invalid("delivery times must be non-negative".into());
        }
        if self.capacity == 0 {
            return invalid("capacity must be positive".into());
        }
        if let Some(d) = self.max_drone_distance {
            if d.is_nan() || d <= 0.0 {
                return invalid(format!("max drone distance must be positive, got {d}"));
            }
        }
        Ok(())
    }

    pub fn customer_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn customers(&self) -> impl Iterator<Item = usize> + '_ {
        1..self.nodes.len()
    }

    pub fn position(&self, node: usize) -> Point {
        self.nodes[node].position()
    }

    pub fn total_demand(&self) -> u64 {
        self.nodes.iter().map(|n| u64::from(n.demand)).sum()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        euclidean_distance(self.position(a), self.position(b))
    }

    /// Largest distance between any two nodes, depot included.
    pub fn max_pairwise_distance(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.nodes.len() {
            for j in i + 1..self.nodes.len() {
                best = best.max(self.distance(i, j));
            }
        }
        best
    }

    /// Writes the instance back in the TSP-D text layout accepted by
    /// [`parse_instance`]. Non-unit demands are appended as a third column.
    pub fn to_tsp_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "/*The speed of the Truck*/");
        let _ = writeln!(out, "{}", self.truck_speed);
        let _ = writeln!(out, "/*The speed of the Drone*/");
        let _ = writeln!(out, "{}", self.drone_speed);
        let _ = writeln!(out, "/*Number of Nodes*/");
        let _ = writeln!(out, "{}", self.nodes.len());
        let _ = writeln!(out, "/*The Depot*/");
        for (i, node) in self.nodes.iter().enumerate() {
            if i == 1 {
                let _ = writeln!(out, "/*The Locations (x_coor y_coor name)*/");
            }
            let label = if i == 0 {
                "depot".to_string()
            } else {
                format!("loc{i}")
            };
            if i > 0 && node.demand != 1 {
                let _ = writeln!(out, "{} {} {} {}", node.x, node.y, node.demand, label);
            } else {
                let _ = writeln!(out, "{} {} {}", node.x, node.y, label);
            }
        }
        out
    }
}

pub fn default_capacity(customers: usize) -> u32 {
    if customers <= SMALL_INSTANCE_CUSTOMERS {
        SMALL_INSTANCE_CAPACITY
    } else {
        LARGE_INSTANCE_CAPACITY
    }
}

/// Settings applied on top of what the instance file itself declares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseOptions {
    pub name: String,
    pub capacity: Option<u32>,
    pub truck_delivery_time: f64,
    pub drone_delivery_time: f64,
    /// Drone range as a fraction of the largest pairwise node distance.
    pub max_drone_distance_fraction: Option<f64>,
    /// Force every customer demand to 1, ignoring any demand column.
    pub unit_demand: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            name: String::new(),
            capacity: None,
            truck_delivery_time: 0.0,
            drone_delivery_time: 0.0,
            max_drone_distance_fraction: None,
            unit_demand: true,
        }
    }
}

/// Parses a TSP-D instance: `/* ... */` comments may appear anywhere; the
/// remaining lines hold truck speed, drone speed, the location count and
/// then one `x y [demand] [name]` line per location, depot first.
pub fn parse_instance(text: &str, options: &ParseOptions) -> Result<Instance, ModelError> {
    let lines = strip_comments(text);
    let mut lines = lines.iter().filter(|(_, l)| !l.trim().is_empty());

    let mut scalar = |what: &'static str| -> Result<(usize, f64), ModelError> {
        let (line, content) = lines.next().ok_or(ModelError::Missing(what))?;
        let token = content.split_whitespace().next().unwrap_or_default();
        let value = parse_number(token, *line)?;
        Ok((*line, value))
    };
    let (_, truck_speed) = scalar("truck speed")?;
    let (_, drone_speed) = scalar("drone speed")?;
    let (count_line, count) = scalar("number of locations")?;
    if count.fract() != 0.0 || count < 2.0 {
        return Err(ModelError::Invalid(format!(
            "line {count_line}: location count must be an integer >= 2, got {count}"
        )));
    }
    let count = count as usize;

    let mut nodes = Vec::with_capacity(count);
    for (line, content) in lines.by_ref().take(count) {
        let mut tokens = content.split_whitespace();
        let mut coord = || -> Result<f64, ModelError> {
            let token = tokens.next().ok_or_else(|| ModelError::Malformed {
                line: *line,
                token: String::new(),
            })?;
            parse_number(token, *line)
        };
        let x = coord()?;
        let y = coord()?;
        let id = nodes.len();
        let demand = if id == 0 {
            0
        } else if options.unit_demand {
            1
        } else {
            tokens.next().and_then(|t| t.parse::<u32>().ok()).unwrap_or(1)
        };
        nodes.push(Node { id, x, y, demand });
    }
    if nodes.len() < count {
        return Err(ModelError::Truncated {
            expected: count,
            found: nodes.len(),
        });
    }

    let customers = count - 1;
    let mut instance = Instance {
        name: options.name.clone(),
        nodes,
        truck_speed,
        drone_speed,
        truck_delivery_time: options.truck_delivery_time,
        drone_delivery_time: options.drone_delivery_time,
        capacity: options.capacity.unwrap_or_else(|| default_capacity(customers)),
        max_drone_distance: None,
    };
    if let Some(fraction) = options.max_drone_distance_fraction {
        instance.max_drone_distance = Some(fraction * instance.max_pairwise_distance());
    }
    instance.validate()?;
    Ok(instance)
}

/// Reads an instance file; the instance name defaults to the file stem.
pub fn load_instance(path: impl AsRef<Path>, options: &ParseOptions) -> Result<Instance, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut options = options.clone();
    if options.name.is_empty() {
        options.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    parse_instance(&text, &options)
}

fn parse_number(token: &str, line: usize) -> Result<f64, ModelError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ModelError::Malformed {
            line,
            token: token.to_string(),
        }),
    }
}

/// Removes `/* ... */` comments (which may span lines), keeping 1-based
/// line numbers for the surviving text.
fn strip_comments(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut in_comment = false;
    for (idx, raw) in text.lines().enumerate() {
        let mut kept = String::new();
        let mut rest = raw;
        loop {
            if in_comment {
                match rest.find("*/") {
                    Some(end) => {
                        in_comment = false;
                        rest = &rest[end + 2..];
                    }
                    None => break,
                }
            } else {
                match rest.find("/*") {
                    Some(start) => {
                        kept.push_str(&rest[..start]);
                        kept.push(' ');
                        in_comment = true;
                        rest = &rest[start + 2..];
                    }
                    None => {
                        kept.push_str(rest);
                        break;
                    }
                }
            }
        }
        out.push((idx + 1, kept));
    }
    out
}

/// Dense symmetric matrix of Euclidean distances between all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(instance: &Instance) -> Self {
        let size = instance.nodes.len();
        let mut data = vec![0.0; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let d = instance.distance(i, j);
                data[i * size + j] = d;
                data[j * size + i] = d;
            }
        }
        DistanceMatrix { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }
}

pub fn distance_matrix(instance: &Instance) -> DistanceMatrix {
    DistanceMatrix::new(instance)
}

/// Number of truck-drone pairs needed to carry the total demand: the
/// demand divided by capacity, rounded up.
pub fn fleet_size(instance: &Instance) -> Result<usize, ModelError> {
    let demand = instance.total_demand();
    if demand == 0 {
        return Err(ModelError::ZeroDemand);
    }
    Ok(demand.div_ceil(u64::from(instance.capacity)) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_instance(customers: usize) -> String {
        let mut text = String::from("/*The speed of the Truck*/\n1\n/*The speed of the Drone*/\n2\n");
        text.push_str(&format!(
            "/*Number of Nodes*/\n{}\n/*The Depot*/\n0 0 depot\n",
            customers + 1
        ));
        text.push_str("/*The Locations (x_coor y_coor name)*/\n");
        for i in 1..=customers {
            text.push_str(&format!("{} {} loc{}\n", i as f64 * 1.5, -(i as f64), i));
        }
        text
    }

    #[test]
    fn distance_examples() {
        assert_eq!(
            euclidean_distance(Point::new(0.0, 0.0), Point::new(3.0, 4.0)),
            5.0
        );
        assert_eq!(
            euclidean_distance(Point::new(2.0, 7.0), Point::new(2.0, 7.0)),
            0.0
        );
        let d = euclidean_distance(Point::new(1.0, 1.0), Point::new(4.0, 5.0));
        let direct = ((4.0f64 - 1.0).powi(2) + (5.0f64 - 1.0).powi(2)).sqrt();
        assert_eq!(d, 5.0);
        assert_eq!(d, direct);
    }

    #[test]
    fn parses_fifty_customer_file() {
        let inst = parse_instance(&line_instance(50), &ParseOptions::default()).unwrap();
        assert_eq!(inst.customer_count(), 50);
        assert_eq!(inst.capacity, 40);
        assert_eq!(inst.truck_speed, 1.0);
        assert_eq!(inst.drone_speed, 2.0);
        assert_eq!(inst.nodes[0].demand, 0);
        assert!(inst.nodes[1..].iter().all(|n| n.demand == 1));
        assert_eq!(fleet_size(&inst).unwrap(), 2);
    }

    #[test]
    fn large_instances_get_capacity_100() {
        let inst = parse_instance(&line_instance(250), &ParseOptions::default()).unwrap();
        assert_eq!(inst.capacity, 100);
        assert_eq!(fleet_size(&inst).unwrap(), 3);
        let inst = parse_instance(&line_instance(100), &ParseOptions::default()).unwrap();
        assert_eq!(inst.capacity, 40);
        assert_eq!(fleet_size(&inst).unwrap(), 3);
    }

    #[test]
    fn fleet_size_exact_division() {
        let inst = parse_instance(&line_instance(40), &ParseOptions::default()).unwrap();
        assert_eq!(fleet_size(&inst).unwrap(), 1);
    }

    #[test]
    fn fleet_size_rejects_zero_demand() {
        let mut inst = parse_instance(&line_instance(3), &ParseOptions::default()).unwrap();
        for node in &mut inst.nodes {
            node.demand = 0;
        }
        assert!(matches!(fleet_size(&inst), Err(ModelError::ZeroDemand)));
    }

    #[test]
    fn drone_range_from_fraction() {
        let options = ParseOptions {
            max_drone_distance_fraction: Some(0.75),
            ..Default::default()
        };
        let inst = parse_instance(&line_instance(4), &options).unwrap();
        let expected = 0.75 * inst.max_pairwise_distance();
        assert_eq!(inst.max_drone_distance, Some(expected));
        // 249.41 * 0.75 rounds to 187.06
        assert_eq!(format!("{:.2}", 0.75 * 249.41), "187.06");
    }

    #[test]
    fn empty_stream_is_an_error() {
        assert!(matches!(
            parse_instance("", &ParseOptions::default()),
            Err(ModelError::Missing(_))
        ));
        assert!(parse_instance("/* only a comment */\n", &ParseOptions::default()).is_err());
    }

    #[test]
    fn malformed_token_reports_line() {
        let text = "/*truck*/\n1\n/*drone*/\nfast\n3\n0 0\n1 1\n2 2\n";
        match parse_instance(text, &ParseOptions::default()) {
            Err(ModelError::Malformed { line, token }) => {
                assert_eq!(line, 4);
                assert_eq!(token, "fast");
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "1\n2\n3\n0 0\n1 x\n2 2\n";
        assert!(matches!(
            parse_instance(text, &ParseOptions::default()),
            Err(ModelError::Malformed { line: 5, .. })
        ));
    }

    #[test]
    fn truncated_file() {
        let text = "1\n2\n5\n0 0\n1 1\n2 2\n";
        assert!(matches!(
            parse_instance(text, &ParseOptions::default()),
            Err(ModelError::Truncated {
                expected: 5,
                found: 3
            })
        ));
    }

    #[test]
    fn non_positive_speed_rejected() {
        let text = "0\n2\n2\n0 0\n1 1\n";
        assert!(matches!(
            parse_instance(text, &ParseOptions::default()),
            Err(ModelError::Invalid(_))
        ));
        let text = "1\n-2\n2\n0 0\n1 1\n";
        assert!(matches!(
            parse_instance(text, &ParseOptions::default()),
            Err(ModelError::Invalid(_))
        ));
    }

    #[test]
    fn comments_inline_and_multiline() {
        let text = "/* multi\nline */ 1.5\n2 /* drone */\n/**/3\n0 0 depot\n1 0\n0 1 c2\n";
        let inst = parse_instance(text, &ParseOptions::default()).unwrap();
        assert_eq!(inst.truck_speed, 1.5);
        assert_eq!(inst.drone_speed, 2.0);
        assert_eq!(inst.customer_count(), 2);
    }

    #[test]
    fn demand_column_when_unit_demand_disabled() {
        let text = "1\n2\n3\n0 0 depot\n1 0 4 a\n0 1 b\n";
        let options = ParseOptions {
            unit_demand: false,
            ..Default::default()
        };
        let inst = parse_instance(text, &options).unwrap();
        assert_eq!(inst.nodes[1].demand, 4);
        assert_eq!(inst.nodes[2].demand, 1);
        let inst = parse_instance(text, &ParseOptions::default()).unwrap();
        assert_eq!(inst.nodes[1].demand, 1);
    }

    #[test]
    fn matrix_of_single_pair() {
        let inst =
            Instance::from_coordinates("pair", &[Point::new(0.0, 0.0), Point::new(3.0, 4.0)], 1.0, 2.0)
                .unwrap();
        let m = distance_matrix(&inst);
        assert_eq!(m.row(0), &[0.0, 5.0]);
        assert_eq!(m.row(1), &[5.0, 0.0]);
        assert_eq!(m.max(), 5.0);
    }
}
