//! Genotype decoding, the makespan objective and VRPDi feasibility rules.

mod decode;
mod feasibility;
mod genotype;
mod svg;

pub use decode::{
    decode, evaluate, improvement, objective, Actor, DecodeError, ImprovementError, Leg, LegPurpose,
    PairSchedule, Rendezvous, Schedule, Totals,
};
pub(crate) use feasibility::launch_node;
pub use feasibility::{check_feasibility, Violation};
pub use genotype::{Delivery, Gene, Genotype};
pub use svg::render_svg;
