//! Augmented ε-constraint driver and the initialisation phase (payoff table,
//! objective ranges and seed solutions).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Instance, Objective, ObjectiveVector};
use crate::pareto::{ArchiveEntry, FrontArchive};
use crate::search::{
    minimise, optimise, AugmentationContext, Clock, ProblemKind, Scalarization, SearchError, SolveRequest,
    Solved, Status,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EpsilonError {
    #[error("the instance has no feasible solution")]
    InfeasibleInstance,
    #[error("initialisation solve for {0} timed out without a feasible solution")]
    InitTimeout(Objective),
    #[error("invalid epsilon grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridPolicy {
    /// Increment 1 on every axis.
    Unit,
    /// Increment `ceil((max - min) / 10)`, at least 1.
    Tenth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridAxis {
    pub objective: Objective,
    pub min: i64,
    pub max: i64,
    pub step: i64,
}

impl GridAxis {
    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        (0..).map(move |k| self.min + k * self.step).take_while(move |v| *v <= self.max)
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Lattice of lower bounds, one axis per bounded objective, walked with the
/// last axis innermost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonGrid {
    axes: Vec<GridAxis>,
}

impl EpsilonGrid {
    pub fn new(axes: Vec<GridAxis>) -> Result<Self, EpsilonError> {
        for (n, a) in axes.iter().enumerate() {
            if a.min > a.max {
                return Err(EpsilonError::InvalidGrid(alloc::format!(
                    "{}: min {} exceeds max {}",
                    a.objective,
                    a.min,
                    a.max
                )));
            }
            if a.step < 1 {
                return Err(EpsilonError::InvalidGrid(alloc::format!(
                    "{}: increment must be at least 1",
                    a.objective
                )));
            }
            if axes[..n].iter().any(|b| b.objective == a.objective) {
                return Err(EpsilonError::InvalidGrid(alloc::format!(
                    "{} appears twice",
                    a.objective
                )));
            }
        }
        Ok(EpsilonGrid { axes })
    }

    /// Axes for `bounded` (sorted by objective id) with the increment chosen by `policy`.
    pub fn from_ranges(
        bounded: &[Objective],
        range: impl Fn(Objective) -> (i64, i64),
        policy: GridPolicy,
    ) -> Result<Self, EpsilonError> {
        let mut bounded = bounded.to_vec();
        bounded.sort_unstable();
        let axes = bounded
            .into_iter()
            .map(|objective| {
                let (min, max) = range(objective);
                let step = match policy {
                    GridPolicy::Unit => 1,
                    GridPolicy::Tenth => ((max - min) as u64).div_ceil(10).max(1) as i64,
                };
                GridAxis { objective, min, max, step }
            })
            .collect();
        EpsilonGrid::new(axes)
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn objectives(&self) -> Vec<Objective> {
        self.axes.iter().map(|a| a.objective).collect()
    }

    pub fn lattice_size(&self) -> u128 {
        self.axes.iter().map(|a| a.len() as u128).product()
    }

    /// Lattice points in nested-loop order.
    pub fn points(&self) -> LatticeIter<'_> {
        LatticeIter { grid: self, current: Some(self.axes.iter().map(|a| a.min).collect()) }
    }
}

pub struct LatticeIter<'a> {
    grid: &'a EpsilonGrid,
    current: Option<Vec<i64>>,
}

impl Iterator for LatticeIter<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for k in (0..next.len()).rev() {
            let axis = &self.grid.axes[k];
            if next[k] + axis.step <= axis.max {
                next[k] += axis.step;
                self.current = Some(next);
                return Some(out);
            }
            next[k] = axis.min;
        }
        Some(out)
    }
}

/// Payoff-table results of the initialisation phase.
#[derive(Clone, Debug, PartialEq)]
pub struct InitReport {
    pub objectives: Vec<Objective>,
    pub z_min: Vec<i64>,
    pub z_max: Vec<i64>,
    /// One optimum per objective, in `objectives` order.
    pub seeds: Vec<Solved>,
    pub seed_objectives: Vec<ObjectiveVector>,
    pub statuses: Vec<Status>,
    /// Lower end of each grid axis. Starts at `z_min`; see [`exact_grid_floor`].
    pub grid_floor: Vec<i64>,
    /// Perturbation divisor of the initialisation scalarisation.
    pub big_m: i64,
}

impl InitReport {
    pub fn range(&self, objective: Objective) -> Option<(i64, i64)> {
        let k = self.objectives.iter().position(|o| *o == objective)?;
        Some((self.z_min[k], self.z_max[k]))
    }

    pub fn augmentation(&self) -> AugmentationContext {
        AugmentationContext {
            ranges: self
                .objectives
                .iter()
                .zip(self.z_min.iter().zip(&self.z_max))
                .map(|(&o, (&lo, &hi))| (o, lo, hi))
                .collect(),
        }
    }

    /// Grid over every active objective except `primary`.
    pub fn grid(&self, primary: Objective, policy: GridPolicy) -> Result<EpsilonGrid, EpsilonError> {
        let bounded: Vec<Objective> =
            self.objectives.iter().copied().filter(|o| *o != primary).collect();
        self.grid_over(&bounded, policy)
    }

    /// Grid over `bounded`, each axis running from `grid_floor` to `z_max`.
    pub fn grid_over(&self, bounded: &[Objective], policy: GridPolicy) -> Result<EpsilonGrid, EpsilonError> {
        let mut ranges = Vec::with_capacity(bounded.len());
        for &o in bounded {
            let k = self
                .objectives
                .iter()
                .position(|x| *x == o)
                .ok_or_else(|| EpsilonError::InvalidGrid(alloc::format!("{o} is not active")))?;
            ranges.push((o, self.grid_floor[k], self.z_max[k]));
        }
        EpsilonGrid::from_ranges(
            bounded,
            |o| ranges.iter().find(|r| r.0 == o).map(|&(_, lo, hi)| (lo, hi)).expect("range collected above"),
            policy,
        )
    }

    pub fn all_optimal(&self) -> bool {
        self.statuses.iter().all(|s| *s == Status::Optimal)
    }
}

/// `1 + Σ` of coarse analytic bounds on every objective's magnitude; larger
/// than any perturbation sum, so `z_i + Σ z_i' / M` is primary-first.
pub fn analytic_big_m(instance: &Instance) -> i64 {
    let n_i = instance.n_members() as i64;
    let n_j = instance.n_defences() as i64;
    let n_t = instance.n_roles() as i64;
    let n_k = instance.n_days() as i64;
    let n_l = instance.n_slots_per_day() as i64;
    let n_q = instance.n_subjects() as i64;
    let d = instance.duration() as i64;
    let z1 = n_i * n_j * n_j;
    let z2 = n_j * n_t * n_q;
    let z3 = instance.total_penalty() as i64 * d;
    let z4 = n_i * n_k * n_k;
    let z5 = n_j * n_k * n_l;
    1 + z1 + z2 + z3 + z4 + z5
}

/// Solves `max z_i + (1/M) Σ z_i'` for every active objective. `z_max` is
/// each objective's own optimum, `z_min` its worst value across the solves.
pub fn initialisation_phase(
    instance: &Instance,
    kind: &ProblemKind,
    objectives: &[Objective],
    time_limit_seconds: f64,
    clock: &dyn Clock,
) -> Result<InitReport, EpsilonError> {
    let mut seeds = Vec::with_capacity(objectives.len());
    let mut seed_objectives = Vec::with_capacity(objectives.len());
    let mut statuses = Vec::with_capacity(objectives.len());
    for &primary in objectives {
        let request = SolveRequest {
            kind: kind.clone(),
            objectives: objectives.to_vec(),
            primary,
            scalarization: Scalarization::Perturbed,
            epsilon_bounds: Vec::new(),
            time_limit_seconds,
        };
        let deadline = clock.deadline(time_limit_seconds);
        let result = optimise(instance, &request, &*deadline)?;
        match result.status {
            Status::Infeasible => return Err(EpsilonError::InfeasibleInstance),
            Status::Timeout => return Err(EpsilonError::InitTimeout(primary)),
            Status::FeasibleTimeout => {
                log::warn!("initialisation solve for {primary} hit its time limit; range is approximate")
            }
            Status::Optimal => {}
        }
        statuses.push(result.status);
        seeds.push(result.solution.expect("feasible status carries a solution"));
        seed_objectives.push(result.objectives.expect("feasible status carries objectives"));
    }
    let n = objectives.len();
    let z_max: Vec<i64> = (0..n).map(|i| seed_objectives[i][i]).collect();
    let z_min: Vec<i64> =
        (0..n).map(|i| seed_objectives.iter().map(|v| v[i]).min().expect("at least one solve")).collect();
    Ok(InitReport {
        objectives: objectives.to_vec(),
        z_min: z_min.clone(),
        z_max,
        seeds,
        seed_objectives,
        statuses,
        grid_floor: z_min,
        big_m: analytic_big_m(instance),
    })
}

/// Lowers `grid_floor` of each objective in `bounded` to its minimum over all feasible
/// solutions. With three or more objectives the payoff-table minimum can lie
/// above the worst value on the Pareto front, so a grid starting there
/// misses efficient points; the feasible minimum never does. A minimisation
/// that times out leaves the floor unchanged: its incumbent is an arbitrary
/// feasible value that would only stretch the grid.
pub fn exact_grid_floor(
    report: &mut InitReport,
    instance: &Instance,
    kind: &ProblemKind,
    bounded: &[Objective],
    time_limit_seconds: f64,
    clock: &dyn Clock,
) -> Result<(), EpsilonError> {
    for &objective in bounded {
        let k = report
            .objectives
            .iter()
            .position(|o| *o == objective)
            .ok_or_else(|| EpsilonError::InvalidGrid(alloc::format!("{objective} is not active")))?;
        let deadline = clock.deadline(time_limit_seconds);
        let result = minimise(instance, kind, objective, &*deadline)?;
        match (result.status, result.objectives) {
            (Status::Infeasible, _) => return Err(EpsilonError::InfeasibleInstance),
            (Status::Optimal, Some(z)) => report.grid_floor[k] = report.grid_floor[k].min(z[0]),
            _ => log::warn!("minimisation of {objective} hit its time limit; keeping the payoff floor"),
        }
    }
    Ok(())
}

/// Whether the solve at `epsilon` can be skipped without changing the
/// result. `found` pairs the bounds a solution was found under with its
/// values on the bounded objectives; `infeasible` lists bounds proven
/// infeasible.
///
/// A solution found under `e_s <= epsilon` that still satisfies `epsilon`
/// stays optimal, since the feasible region only shrank. Requiring
/// `e_s <= epsilon` keeps the rule exact with more than one bounded
/// objective, where a solution met under incomparable bounds need not be
/// optimal here. Tightening known-infeasible bounds stays infeasible.
pub fn not_skip<'a, F>(epsilon: &[i64], found: F, infeasible: &[Vec<i64>]) -> bool
where
    F: IntoIterator<Item = (&'a [i64], &'a [i64])>,
{
    let ge = |a: &[i64], b: &[i64]| a.iter().zip(b).all(|(x, y)| x >= y);
    let covered = found.into_iter().any(|(e_s, bounded)| ge(epsilon, e_s) && ge(bounded, epsilon));
    let hopeless = infeasible.iter().any(|e| ge(epsilon, e));
    !(covered || hopeless)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonSettings {
    pub objectives: Vec<Objective>,
    pub primary: Objective,
    pub time_limit_seconds: f64,
    pub skipping: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationAction {
    Solved,
    SkippedCovered,
    SkippedInfeasible,
}

/// One lattice point of the walk, for the audit ledger.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub epsilon: Vec<i64>,
    pub action: IterationAction,
    pub status: Option<Status>,
    pub objectives: Option<ObjectiveVector>,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoundSolution {
    pub epsilon: Vec<i64>,
    pub status: Status,
    pub solution: Solved,
    pub objectives: ObjectiveVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonOutcome {
    /// Every feasible solve result, in walk order, before filtering.
    pub found: Vec<FoundSolution>,
    pub infeasible: Vec<Vec<i64>>,
    pub iterations: Vec<IterationRecord>,
    pub solves: usize,
    /// Rank-0 filter of `found`; payloads index into `found`.
    pub front: FrontArchive,
}

impl EpsilonOutcome {
    pub fn all_optimal(&self) -> bool {
        self.found.iter().all(|f| f.status == Status::Optimal)
    }
}

/// Walks the lattice of `grid`, solving `max z_primary + augmentation`
/// under `z_i >= ε_i` at every point not ruled out by [`not_skip`].
pub fn augmented_epsilon_constraint(
    instance: &Instance,
    kind: &ProblemKind,
    grid: &EpsilonGrid,
    augmentation: &AugmentationContext,
    settings: &EpsilonSettings,
    clock: &dyn Clock,
) -> Result<EpsilonOutcome, EpsilonError> {
    let bounded = grid.objectives();
    if bounded.contains(&settings.primary) {
        return Err(EpsilonError::InvalidGrid(alloc::format!(
            "primary {} cannot be bounded",
            settings.primary
        )));
    }
    let positions: Vec<usize> = bounded
        .iter()
        .map(|o| {
            settings.objectives.iter().position(|x| x == o).ok_or_else(|| {
                EpsilonError::InvalidGrid(alloc::format!("bounded {o} is not an active objective"))
            })
        })
        .collect::<Result<_, _>>()?;

    let mut found: Vec<FoundSolution> = Vec::new();
    let mut found_bounded: Vec<Vec<i64>> = Vec::new();
    let mut infeasible: Vec<Vec<i64>> = Vec::new();
    let mut iterations = Vec::new();
    let mut solves = 0;

    for epsilon in grid.points() {
        if settings.skipping {
            let pairs = found.iter().zip(&found_bounded).map(|(f, b)| (&f.epsilon[..], &b[..]));
            if !not_skip(&epsilon, pairs, &infeasible) {
                let hopeless = infeasible.iter().any(|e| epsilon.iter().zip(e).all(|(x, y)| x >= y));
                iterations.push(IterationRecord {
                    epsilon,
                    action: if hopeless {
                        IterationAction::SkippedInfeasible
                    } else {
                        IterationAction::SkippedCovered
                    },
                    status: None,
                    objectives: None,
                    gap: 0.0,
                });
                continue;
            }
        }
        let request = SolveRequest {
            kind: kind.clone(),
            objectives: settings.objectives.clone(),
            primary: settings.primary,
            scalarization: Scalarization::Augmented(augmentation.clone()),
            epsilon_bounds: bounded.iter().copied().zip(epsilon.iter().copied()).collect(),
            time_limit_seconds: settings.time_limit_seconds,
        };
        let deadline = clock.deadline(settings.time_limit_seconds);
        let result = optimise(instance, &request, &*deadline)?;
        solves += 1;
        iterations.push(IterationRecord {
            epsilon: epsilon.clone(),
            action: IterationAction::Solved,
            status: Some(result.status),
            objectives: result.objectives.clone(),
            gap: result.gap,
        });
        match (result.solution, result.objectives) {
            (Some(solution), Some(objectives)) => {
                found_bounded.push(positions.iter().map(|&p| objectives[p]).collect());
                found.push(FoundSolution { epsilon, status: result.status, solution, objectives });
            }
            _ => {
                if result.status == Status::Infeasible {
                    infeasible.push(epsilon);
                }
            }
        }
    }

    let front = FrontArchive::new(
        found
            .iter()
            .enumerate()
            .map(|(k, f)| ArchiveEntry { objectives: f.objectives.clone(), payload: k as u64 })
            .collect(),
    )
    .nondominated();
    log::debug!(
        "epsilon walk: {} lattice points, {} solves, {} solutions, front of {}",
        iterations.len(),
        solves,
        found.len(),
        front.len()
    );
    Ok(EpsilonOutcome { found, infeasible, iterations, solves, front })
}

/// Convenience: the single-objective case yields a zero-dimensional lattice.
pub fn single_point_grid() -> EpsilonGrid {
    EpsilonGrid { axes: vec![] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(objective: Objective, min: i64, max: i64, step: i64) -> GridAxis {
        GridAxis { objective, min, max, step }
    }

    #[test]
    fn lattice_walks_last_axis_innermost() {
        let grid =
            EpsilonGrid::new(vec![axis(Objective::Z1, 0, 1, 1), axis(Objective::Z2, 5, 9, 2)]).unwrap();
        let pts: Vec<Vec<i64>> = grid.points().collect();
        assert_eq!(
            pts,
            vec![vec![0, 5], vec![0, 7], vec![0, 9], vec![1, 5], vec![1, 7], vec![1, 9]]
        );
        assert_eq!(grid.lattice_size(), 6);
        assert_eq!(single_point_grid().points().count(), 1);
    }

    #[test]
    fn tenth_grid_has_at_most_eleven_values() {
        for range in [0i64, 1, 9, 10, 11, 99, 100, 101, 12345] {
            let g = EpsilonGrid::from_ranges(&[Objective::Z4], |_| (-range, 0), GridPolicy::Tenth).unwrap();
            assert!(g.lattice_size() <= 11, "range {range}");
            assert_eq!(g.axes()[0].min, -range);
        }
    }

    #[test]
    fn grid_rejects_bad_axes() {
        assert!(EpsilonGrid::new(vec![axis(Objective::Z1, 2, 1, 1)]).is_err());
        assert!(EpsilonGrid::new(vec![axis(Objective::Z1, 0, 1, 0)]).is_err());
    }

    #[test]
    fn skip_examples() {
        let none: [(&[i64], &[i64]); 0] = [];
        // covered by a solution found under looser bounds
        assert!(!not_skip(&[4, 5], [(&[0i64, 0][..], &[5i64, 5][..])], &[]));
        // stricter than a known-infeasible point
        assert!(!not_skip(&[4, 3], none, &[vec![3, 3]]));
        assert!(not_skip(&[3, 3], [(&[0i64, 0][..], &[4i64, 2][..])], &[]));
        // a solution found under incomparable bounds does not cover
        assert!(not_skip(&[1, 3], [(&[2i64, 0][..], &[5i64, 5][..])], &[]));
    }
}
