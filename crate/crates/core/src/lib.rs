//! Beam-search strip packing.
//!
//! Packs rectangles into a strip of fixed width while minimising the used
//! length. The solver first tries to fill the smallest container the box
//! area allows, packs any leftovers into an open strip on top, and then
//! searches a sweep of intermediate container lengths in parallel.
//!
//! ```no_run
//! use bspa::{solve, Instance, SolverConfig};
//!
//! let instance = Instance::from_items("demo", 10, [(4, 6), (6, 6), (10, 4)]);
//! let report = solve(&instance, &SolverConfig::deterministic(0.1, 10_000, 1)).unwrap();
//! println!("length {} gap {}", report.solution.used_length, report.solution.gap_percent());
//! ```

pub mod beam;
pub mod bench;
pub mod blocks;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod io;
pub mod render;
pub mod solution;
pub mod solver;

pub use error::{ParseError, SolveError, ValidationError};
pub use geometry::Rect;
pub use instance::{BoxType, Instance, Rotation};
pub use solution::Solution;
pub use solver::{compute_gap, solve, SolveReport, SolverConfig};
