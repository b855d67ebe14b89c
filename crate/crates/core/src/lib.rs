//! Vehicle routing with truck-drone pairs where a drone may rejoin its
//! truck while the truck is still driving.
//!
//! * [`model`]: instances, the TSP-D file format, distances, fleet size.
//! * [`geometry`]: closed-form interception and the rendezvous decision.
//! * [`evaluator`]: genotype decoding, objective, feasibility, SVG output.
//! * [`engine`]: the evolutionary algorithm and its operators.
//! * [`oracle`]: brute-force optimum for tiny instances.
//! * [`stats`]: Mann-Whitney comparisons and run summaries.

pub mod engine;
pub mod evaluator;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod stats;

pub use engine::{run, EaConfig, Mode, RunReport, Solution};
pub use evaluator::{decode, Delivery, Gene, Genotype, Schedule};
pub use model::{load_instance, parse_instance, Instance, ParseOptions, Point};
