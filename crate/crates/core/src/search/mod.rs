//! Exact single-objective backend: depth-first branch-and-bound that
//! maximises one objective (with a sub-unit tie-breaking term built from the
//! others) subject to integer lower bounds on the remaining objectives.
//!
//! Three problem shapes share one engine. `Monolithic` chooses committees and
//! placements together, `Stage2` places defences whose committees are fixed,
//! and `Stage1` chooses committees only (no calendar conflicts, used for the
//! committee-objective payoff table).

mod bnb;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{CommitteeConfig, FullSolution, Instance, Objective, ObjectiveVector};

pub use bnb::Choice;

/// Cooperative cancellation; polled every [`CHECK_INTERVAL`] nodes.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// Never expires.
pub struct NoDeadline;

impl Deadline for NoDeadline {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

pub const CHECK_INTERVAL: u64 = 1024;

/// Hands out a fresh deadline per solve. The core crate has no clock; the
/// std companion provides a wall-clock implementation.
pub trait Clock: Sync {
    fn deadline(&self, seconds: f64) -> Box<dyn Deadline + Send>;
}

/// A clock whose deadlines never expire.
pub struct Unlimited;

impl Clock for Unlimited {
    fn deadline(&self, _seconds: f64) -> Box<dyn Deadline + Send> {
        Box::new(NoDeadline)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Monolithic,
    Stage1,
    Stage2(CommitteeConfig),
}

impl ProblemKind {
    pub fn schedules(&self) -> bool {
        !matches!(self, ProblemKind::Stage1)
    }
}

/// `z_min` / `z_max` for the non-primary objectives, used to build the
/// augmentation term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentationContext {
    pub ranges: Vec<(Objective, i64, i64)>,
}

impl AugmentationContext {
    pub fn range(&self, objective: Objective) -> Option<(i64, i64)> {
        self.ranges.iter().find(|(o, _, _)| *o == objective).map(|&(_, lo, hi)| (lo, hi))
    }
}

/// How the non-primary objectives break ties between equal primary values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalarization {
    /// `z_p + 1/n_z * Σ (z_i - z_i^min) / (z_i^max - z_i^min)`.
    Augmented(AugmentationContext),
    /// `z_p + 1/M * Σ z_i` with `M` larger than any possible sum.
    Perturbed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveRequest {
    pub kind: ProblemKind,
    /// Active objectives; fixes the order of the returned objective vector.
    pub objectives: Vec<Objective>,
    pub primary: Objective,
    pub scalarization: Scalarization,
    /// Lower bounds `z_i >= ε_i` on non-primary objectives.
    pub epsilon_bounds: Vec<(Objective, i64)>,
    pub time_limit_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    FeasibleTimeout,
    Infeasible,
    /// The deadline hit before any feasible leaf was found; feasibility is unknown.
    Timeout,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::FeasibleTimeout => "feasible_timeout",
            Status::Infeasible => "infeasible",
            Status::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Full(FullSolution),
    Committees(CommitteeConfig),
}

impl Solved {
    pub fn config(&self) -> &CommitteeConfig {
        match self {
            Solved::Full(s) => &s.config,
            Solved::Committees(c) => c,
        }
    }

    pub fn full(&self) -> Option<&FullSolution> {
        match self {
            Solved::Full(s) => Some(s),
            Solved::Committees(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned_by_epsilon: u64,
    pub pruned_by_bound: u64,
    pub dead_ends: u64,
    pub incumbents: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    pub solution: Option<Solved>,
    pub objectives: Option<ObjectiveVector>,
    /// Relative gap of the primary objective against the root bound; 0 when optimal.
    pub gap: f64,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn is_feasible(&self) -> bool {
        self.solution.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid solve request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

impl SolveRequest {
    pub fn validate(&self, instance: &Instance) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidRequest(msg));
        if self.objectives.is_empty() {
            return bad("no active objectives".into());
        }
        for (n, o) in self.objectives.iter().enumerate() {
            if self.objectives[..n].contains(o) {
                return bad(alloc::format!("objective {o} listed twice"));
            }
            if !self.kind.schedules() && !o.is_committee_objective() {
                return bad(alloc::format!("objective {o} needs a schedule"));
            }
        }
        if !self.objectives.contains(&self.primary) {
            return bad(alloc::format!("primary {} is not active", self.primary));
        }
        for (o, _) in &self.epsilon_bounds {
            if *o == self.primary {
                return bad(alloc::format!("primary {o} cannot be bounded"));
            }
            if !self.objectives.contains(o) {
                return bad(alloc::format!("bounded objective {o} is not active"));
            }
        }
        if let Scalarization::Augmented(ctx) = &self.scalarization {
            for o in self.objectives.iter().filter(|o| **o != self.primary) {
                match ctx.range(*o) {
                    None => return bad(alloc::format!("no augmentation range for {o}")),
                    Some((lo, hi)) if lo > hi => {
                        return bad(alloc::format!("augmentation range of {o} is empty"))
                    }
                    _ => {}
                }
            }
        }
        if self.time_limit_seconds.is_nan() || self.time_limit_seconds <= 0.0 {
            return bad("time limit must be positive".into());
        }
        if let ProblemKind::Stage2(config) = &self.kind {
            config.check_shape(instance)?;
        }
        Ok(())
    }
}

/// Reported value of the augmented objective. Zero-range objectives add 0.
pub fn augmented_value(z: &[i64], primary: usize, ranges: &[(i64, i64)]) -> f64 {
    let n = z.len() as f64;
    let mut extra = 0.0;
    for (i, (&v, &(lo, hi))) in z.iter().zip(ranges).enumerate() {
        if i == primary || hi == lo {
            continue;
        }
        extra += (v - lo) as f64 / (hi - lo) as f64;
    }
    z[primary] as f64 + extra / n
}

/// Solves one scalarised problem. The `deadline` is polled every
/// [`CHECK_INTERVAL`] nodes; on expiry the incumbent is returned.
pub fn optimise(
    instance: &Instance,
    request: &SolveRequest,
    deadline: &dyn Deadline,
) -> Result<SolveResult, SearchError> {
    request.validate(instance)?;
    let mut searcher = bnb::Searcher::new(instance, request);
    Ok(searcher.run(deadline))
}

/// Minimises a single objective over all feasible solutions. The result
/// carries the value of `objective` only.
pub fn minimise(
    instance: &Instance,
    kind: &ProblemKind,
    objective: Objective,
    deadline: &dyn Deadline,
) -> Result<SolveResult, SearchError> {
    let request = SolveRequest {
        kind: kind.clone(),
        objectives: alloc::vec![objective],
        primary: objective,
        scalarization: Scalarization::Perturbed,
        epsilon_bounds: Vec::new(),
        time_limit_seconds: f64::INFINITY,
    };
    request.validate(instance)?;
    let mut searcher = bnb::Searcher::new(instance, &request).minimising();
    Ok(searcher.run(deadline))
}

/// Admissible per-objective upper bounds (over `objectives`) for every
/// completion of `partial`, or `None` when the partial assignment is
/// inconsistent or provably has no completion. `partial[j]` is the fixed
/// choice for defence `j`, if any.
pub fn optimistic_bounds(
    instance: &Instance,
    kind: &ProblemKind,
    objectives: &[Objective],
    partial: &[Option<Choice>],
) -> Option<ObjectiveVector> {
    let request = SolveRequest {
        kind: kind.clone(),
        objectives: objectives.to_vec(),
        primary: objectives[0],
        scalarization: Scalarization::Perturbed,
        epsilon_bounds: Vec::new(),
        time_limit_seconds: 1.0,
    };
    let mut searcher = bnb::Searcher::new(instance, &request);
    searcher.bounds_for_partial(partial)
}

/// Per-objective lower bounds (over `objectives`) valid for every feasible
/// solution, or `None` when some defence has no candidate at all.
pub fn pessimistic_bounds(
    instance: &Instance,
    kind: &ProblemKind,
    objectives: &[Objective],
) -> Option<ObjectiveVector> {
    let request = SolveRequest {
        kind: kind.clone(),
        objectives: objectives.to_vec(),
        primary: objectives[0],
        scalarization: Scalarization::Perturbed,
        epsilon_bounds: Vec::new(),
        time_limit_seconds: 1.0,
    };
    bnb::Searcher::new(instance, &request).root_lower_bounds()
}
