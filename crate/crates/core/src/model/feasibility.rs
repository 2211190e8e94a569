use alloc::vec::Vec;
use core::fmt;

use super::{FullSolution, Instance, ModelError};

/// A violated hard constraint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    NotEligible { defence: usize, role: usize, member: usize },
    DuplicateMember { defence: usize, member: usize },
    DayOverrun { defence: usize },
    Unavailable { defence: usize, member: usize, day: usize, slot: usize },
    MemberOverlap { member: usize, first: usize, second: usize },
    RoomOverlap { room: usize, first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotEligible { defence, role, member } => {
                write!(f, "member {member} is not eligible for role {role} of defence {defence}")
            }
            Violation::DuplicateMember { defence, member } => {
                write!(f, "member {member} appears twice in the committee of defence {defence}")
            }
            Violation::DayOverrun { defence } => {
                write!(f, "defence {defence} runs past the end of its day")
            }
            Violation::Unavailable { defence, member, day, slot } => write!(
                f,
                "member {member} of defence {defence} is unavailable on day {day} slot {slot}"
            ),
            Violation::MemberOverlap { member, first, second } => {
                write!(f, "member {member} sits in overlapping defences {first} and {second}")
            }
            Violation::RoomOverlap { room, first, second } => {
                write!(f, "room {room} holds overlapping defences {first} and {second}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks committee completeness, window availability, and member and room
/// overlaps over the full `duration`-slot windows. Index errors are reported
/// as [`ModelError::MalformedSolution`], never as violations.
pub fn check_feasible(instance: &Instance, solution: &FullSolution) -> Result<FeasibilityReport, ModelError> {
    solution.check_shape(instance)?;
    let cal = instance.calendar();
    let config = &solution.config;
    let mut violations = Vec::new();
    let n = instance.n_defences();

    for j in 0..n {
        let committee = config.committee(j);
        for (t, &i) in committee.iter().enumerate() {
            if instance.eligible(j, t).binary_search(&i).is_err() {
                violations.push(Violation::NotEligible { defence: j, role: t, member: i });
            }
            if committee[..t].contains(&i) {
                violations.push(Violation::DuplicateMember { defence: j, member: i });
            }
        }
        let p = solution.schedule.placement(j);
        if p.slot + instance.duration() > instance.n_slots_per_day() {
            violations.push(Violation::DayOverrun { defence: j });
            continue;
        }
        let start = cal.index(p.day, p.slot);
        let mut reported = Vec::new();
        for &i in committee {
            if reported.contains(&i) {
                continue;
            }
            if let Some(s) = cal.window(start).find(|&s| !instance.availability(i).contains(s)) {
                let (day, slot) = cal.day_slot(s);
                violations.push(Violation::Unavailable { defence: j, member: i, day, slot });
                reported.push(i);
            }
        }
    }

    let overlap = |a: usize, b: usize| {
        let (pa, pb) = (solution.schedule.placement(a), solution.schedule.placement(b));
        pa.day == pb.day
            && pa.slot < pb.slot + instance.duration()
            && pb.slot < pa.slot + instance.duration()
    };
    for a in 0..n {
        for b in a + 1..n {
            if !overlap(a, b) {
                continue;
            }
            let room = solution.schedule.placement(a).room;
            if room == solution.schedule.placement(b).room {
                violations.push(Violation::RoomOverlap { room, first: a, second: b });
            }
            let cb = config.committee(b);
            let mut seen = Vec::new();
            for &i in config.committee(a) {
                if cb.contains(&i) && !seen.contains(&i) {
                    violations.push(Violation::MemberOverlap { member: i, first: a, second: b });
                    seen.push(i);
                }
            }
        }
    }
    Ok(FeasibilityReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t1;
    use crate::model::{CommitteeConfig, Placement, Schedule};
    use alloc::vec;

    fn sol(committees: [[usize; 2]; 2], starts: [(usize, usize); 2]) -> FullSolution {
        FullSolution {
            config: CommitteeConfig::from_committees(&[committees[0].to_vec(), committees[1].to_vec()]),
            schedule: Schedule(
                starts.iter().map(|&(slot, room)| Placement { day: 0, slot, room }).collect(),
            ),
        }
    }

    #[test]
    fn t1_reference_solution_is_feasible() {
        let report = check_feasible(&t1(), &sol([[0, 2], [1, 3]], [(0, 0), (2, 0)])).unwrap();
        assert!(report.is_feasible(), "{:?}", report);
    }

    #[test]
    fn same_start_same_room_is_room_overlap() {
        let report = check_feasible(&t1(), &sol([[0, 2], [1, 3]], [(0, 0), (0, 0)])).unwrap();
        assert!(report.violations.contains(&Violation::RoomOverlap { room: 0, first: 0, second: 1 }));
    }

    #[test]
    fn member_outside_availability() {
        let report = check_feasible(&t1(), &sol([[0, 2], [1, 3]], [(2, 0), (0, 0)])).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Unavailable { defence: 0, member: 2, .. })));
    }

    #[test]
    fn overrun_and_overlap() {
        let report = check_feasible(&t1(), &sol([[0, 2], [1, 2]], [(3, 0), (1, 0)])).unwrap();
        assert!(report.violations.contains(&Violation::DayOverrun { defence: 0 }));
        let report = check_feasible(&t1(), &sol([[0, 2], [1, 2]], [(0, 0), (1, 0)])).unwrap();
        assert!(report.violations.contains(&Violation::MemberOverlap { member: 2, first: 0, second: 1 }));
    }

    #[test]
    fn index_errors_are_malformed() {
        let bad = sol([[0, 2], [1, 3]], [(0, 5), (2, 0)]);
        assert!(matches!(check_feasible(&t1(), &bad), Err(ModelError::MalformedSolution(_))));
        let bad = FullSolution {
            config: CommitteeConfig::from_committees(&[vec![0, 9], vec![1, 3]]),
            schedule: Schedule(vec![Placement { day: 0, slot: 0, room: 0 }; 2]),
        };
        assert!(matches!(check_feasible(&t1(), &bad), Err(ModelError::MalformedSolution(_))));
    }
}
