//! File formats, wall-clock deadlines, run orchestration and the command
//! line for the `defsched-core` solver.

pub mod cli;
pub mod clock;
pub mod formats;
pub mod pipeline;

pub use clock::WallClock;
