//! Red/blue partitioned-pairs network optimization.
//!
//! Each instance has `n` node pairs; a solution colors one node of every pair
//! red and the other blue and builds a spanning tree, tour or perfect
//! matching on each color class.

pub mod approx;
pub mod cyclecover;
pub mod generators;
pub mod instance;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod solvers;
pub mod weight;

pub use instance::{Color, Coloring, MetricInstance, Objective, StructureKind, StructurePair};
pub use weight::Weight;
