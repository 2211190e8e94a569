#![allow(dead_code)]

use defsched_core::epsilon::{
    augmented_epsilon_constraint, exact_grid_floor, initialisation_phase, EpsilonOutcome, EpsilonSettings,
    GridPolicy,
};
use defsched_core::model::{Instance, Objective, ObjectiveVector, MONOLITHIC_OBJECTIVES};
use defsched_core::pareto::dominates;
use defsched_core::search::{ProblemKind, Unlimited};

pub const UNLIMITED: f64 = 1e9;

/// Monolithic augmented ε-constraint run with primary Z1.
pub fn monolithic(instance: &Instance, policy: GridPolicy, skipping: bool) -> EpsilonOutcome {
    let kind = ProblemKind::Monolithic;
    let mut init = initialisation_phase(instance, &kind, &MONOLITHIC_OBJECTIVES, UNLIMITED, &Unlimited).unwrap();
    let bounded = [Objective::Z2, Objective::Z3, Objective::Z4];
    exact_grid_floor(&mut init, instance, &kind, &bounded, UNLIMITED, &Unlimited).unwrap();
    let grid = init.grid(Objective::Z1, policy).unwrap();
    let settings = EpsilonSettings {
        objectives: MONOLITHIC_OBJECTIVES.to_vec(),
        primary: Objective::Z1,
        time_limit_seconds: UNLIMITED,
        skipping,
    };
    augmented_epsilon_constraint(instance, &kind, &grid, &init.augmentation(), &settings, &Unlimited).unwrap()
}

pub fn sorted(vectors: impl IntoIterator<Item = ObjectiveVector>) -> Vec<ObjectiveVector> {
    let mut v: Vec<ObjectiveVector> = vectors.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

/// Peels maximal sets using nothing but pairwise comparisons.
pub fn pairwise_ranks(pts: &[Vec<i64>]) -> Vec<usize> {
    let mut ranks = vec![usize::MAX; pts.len()];
    let mut rank = 0;
    while ranks.contains(&usize::MAX) {
        let open: Vec<usize> = (0..pts.len()).filter(|&i| ranks[i] == usize::MAX).collect();
        let layer: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&i| !open.iter().any(|&k| dominates(&pts[k], &pts[i])))
            .collect();
        for i in layer {
            ranks[i] = rank;
        }
        rank += 1;
    }
    ranks
}

/// Per objective: sort the other values, take the nearest at-least and
/// at-most neighbours, infinite at either extreme.
pub fn naive_crowding(s: usize, set: &[Vec<i64>]) -> f64 {
    let mut total = 0.0;
    for m in 0..set[s].len() {
        let v = set[s][m];
        let mut others: Vec<i64> = set.iter().enumerate().filter(|(k, _)| *k != s).map(|(_, p)| p[m]).collect();
        if others.is_empty() {
            return f64::INFINITY;
        }
        others.sort_unstable();
        let lo = others[0].min(v);
        let hi = others[others.len() - 1].max(v);
        if lo == hi {
            continue;
        }
        if others[0] >= v || others[others.len() - 1] <= v {
            // no strictly worse or no strictly better neighbour
            return f64::INFINITY;
        }
        let up = others[others.partition_point(|&w| w < v)];
        let down = others[others.partition_point(|&w| w <= v) - 1];
        total += (up - down) as f64 / (hi - lo) as f64;
    }
    total
}
