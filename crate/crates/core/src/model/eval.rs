use alloc::vec;
use alloc::vec::Vec;

use super::{CommitteeConfig, FullSolution, Instance, ModelError, Objective, ObjectiveVector};

/// Negated sum of squared workloads; the workload of a member is the number
/// of (defence, role) assignments they hold.
pub fn eval_z1_workload(instance: &Instance, config: &CommitteeConfig) -> i64 {
    let mut loads = vec![0i64; instance.n_members()];
    for &i in config.genes() {
        loads[i] += 1;
    }
    -loads.iter().map(|l| l * l).sum::<i64>()
}

/// Number of shared research subjects over all assignments, preassigned roles included.
pub fn eval_z2_suitability(instance: &Instance, config: &CommitteeConfig) -> i64 {
    (0..config.n_defences())
        .map(|j| config.committee(j).iter().map(|&i| instance.suitability(i, j)).sum::<i64>())
        .sum()
}

/// Negated slot-preference penalty, accrued over every occupied slot.
pub fn eval_z3_preferences(instance: &Instance, solution: &FullSolution) -> i64 {
    let mut total = 0;
    for j in 0..solution.config.n_defences() {
        let start = solution.start_index(instance, j);
        for &i in solution.config.committee(j) {
            total += instance.window_penalty(i, start);
        }
    }
    -total
}

/// Negated sum of squared committee days per member.
pub fn eval_z4_days(instance: &Instance, solution: &FullSolution) -> i64 {
    let days = instance.n_days();
    let mut used = vec![false; instance.n_members() * days];
    for j in 0..solution.config.n_defences() {
        let day = solution.schedule.placement(j).day;
        for &i in solution.config.committee(j) {
            used[i * days + day] = true;
        }
    }
    -used
        .chunks(days)
        .map(|row| {
            let n = row.iter().filter(|u| **u).count() as i64;
            n * n
        })
        .sum::<i64>()
}

/// Number of (defence, slot) pairs in which the whole committee is available.
/// Counts single slots, not windows.
pub fn eval_z5_proxy(instance: &Instance, config: &CommitteeConfig) -> i64 {
    (0..config.n_defences())
        .map(|j| instance.common_availability(config.committee(j)).count() as i64)
        .sum()
}

/// Evaluates `objectives` on a full solution, in the given order.
pub fn evaluate(instance: &Instance, solution: &FullSolution, objectives: &[Objective]) -> ObjectiveVector {
    ObjectiveVector(
        objectives
            .iter()
            .map(|o| match o {
                Objective::Z1 => eval_z1_workload(instance, &solution.config),
                Objective::Z2 => eval_z2_suitability(instance, &solution.config),
                Objective::Z3 => eval_z3_preferences(instance, solution),
                Objective::Z4 => eval_z4_days(instance, solution),
                Objective::Z5 => eval_z5_proxy(instance, &solution.config),
            })
            .collect::<Vec<_>>(),
    )
}

/// Evaluates committee-only objectives on a configuration.
pub fn evaluate_config(
    instance: &Instance,
    config: &CommitteeConfig,
    objectives: &[Objective],
) -> Result<ObjectiveVector, ModelError> {
    objectives
        .iter()
        .map(|o| match o {
            Objective::Z1 => Ok(eval_z1_workload(instance, config)),
            Objective::Z2 => Ok(eval_z2_suitability(instance, config)),
            Objective::Z5 => Ok(eval_z5_proxy(instance, config)),
            other => Err(ModelError::NeedsSchedule(*other)),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(ObjectiveVector)
}
