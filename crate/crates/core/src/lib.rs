//! Multi-objective solver core for the single-assignment thesis defence
//! scheduling problem.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithm of
//! the solver: the domain model and objective evaluators, Pareto machinery
//! (dominance, front ranking, crowding, exact hypervolume), the genetic
//! committee search (NSGA-II / NSGA-III), the exact branch-and-bound backend,
//! the augmented ε-constraint driver and a brute-force oracle for tiny
//! instances. File formats, wall-clock deadlines, parallel orchestration and
//! the command line live in the companion `defsched` crate.
#![no_std]

extern crate alloc;

pub mod epsilon;
pub mod fixtures;
pub mod ga;
pub mod generator;
pub mod model;
pub mod oracle;
pub mod pareto;
pub mod search;

pub use model::{
    CommitteeConfig, FullSolution, Instance, Objective, ObjectiveVector, Placement, Schedule,
};
