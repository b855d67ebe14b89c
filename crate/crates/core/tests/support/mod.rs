#![allow(dead_code, unused_imports)]

mod geometry;
mod kinematics;
mod random;

pub use geometry::{bisection_oracle, gap};
pub use kinematics::simulate;
pub use random::{random_genotype, random_instance};
