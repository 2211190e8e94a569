//! Brute-force ground truth for tiny instances. Shares nothing with the
//! search and ε-constraint code beyond the model evaluators.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{
    evaluate, CommitteeConfig, FullSolution, Instance, ObjectiveVector, Placement, Schedule,
    MONOLITHIC_OBJECTIVES,
};
use crate::pareto::{ArchiveEntry, FrontArchive};

pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search space of {size} raw assignments exceeds the oracle cap of {cap}")]
pub struct CapExceeded {
    pub size: u128,
    pub cap: u128,
}

/// `Π_j (Π_t |A_jt| · days · slots · rooms)`, saturating.
pub fn search_space_size(instance: &Instance) -> u128 {
    let places = (instance.n_days() * instance.n_slots_per_day() * instance.n_rooms()) as u128;
    let mut size: u128 = 1;
    for j in 0..instance.n_defences() {
        let mut per = places;
        for t in 0..instance.n_roles() {
            per = per.saturating_mul(instance.eligible(j, t).len() as u128);
        }
        size = size.saturating_mul(per);
    }
    size
}

fn check_cap(instance: &Instance, cap: u128) -> Result<(), CapExceeded> {
    let size = search_space_size(instance);
    if size > cap {
        Err(CapExceeded { size, cap })
    } else {
        Ok(())
    }
}

struct Enumerator<'a> {
    instance: &'a Instance,
    committees: Vec<Vec<usize>>,
    placements: Vec<Placement>,
    out: Vec<(FullSolution, ObjectiveVector)>,
}

impl Enumerator<'_> {
    fn available(&self, committee: &[usize], p: Placement) -> bool {
        let d = self.instance.duration();
        committee.iter().all(|&i| {
            (p.slot..p.slot + d)
                .all(|l| self.instance.availability(i).contains(self.instance.calendar().index(p.day, l)))
        })
    }

    fn clashes(&self, committee: &[usize], p: Placement) -> bool {
        let d = self.instance.duration();
        self.placements.iter().zip(&self.committees).any(|(q, other)| {
            let overlap = q.day == p.day && q.slot < p.slot + d && p.slot < q.slot + d;
            overlap && (q.room == p.room || other.iter().any(|i| committee.contains(i)))
        })
    }

    fn defence(&mut self, j: usize) {
        if j == self.instance.n_defences() {
            let solution = FullSolution {
                config: CommitteeConfig::from_committees(&self.committees),
                schedule: Schedule(self.placements.clone()),
            };
            let z = evaluate(self.instance, &solution, &MONOLITHIC_OBJECTIVES);
            self.out.push((solution, z));
            return;
        }
        let mut committee = Vec::with_capacity(self.instance.n_roles());
        self.role(j, &mut committee);
    }

    fn role(&mut self, j: usize, committee: &mut Vec<usize>) {
        let inst = self.instance;
        if committee.len() == inst.n_roles() {
            let last_start = inst.n_slots_per_day() - inst.duration();
            for day in 0..inst.n_days() {
                for slot in 0..=last_start {
                    for room in 0..inst.n_rooms() {
                        let p = Placement { day, slot, room };
                        if self.available(committee, p) && !self.clashes(committee, p) {
                            self.committees.push(committee.clone());
                            self.placements.push(p);
                            self.defence(j + 1);
                            self.committees.pop();
                            self.placements.pop();
                        }
                    }
                }
            }
            return;
        }
        for &i in inst.eligible(j, committee.len()) {
            if !committee.contains(&i) {
                committee.push(i);
                self.role(j, committee);
                committee.pop();
            }
        }
    }
}

/// Every feasible full solution with its `(z1, z2, z3, z4)` vector.
pub fn enumerate_all(
    instance: &Instance,
    cap: u128,
) -> Result<Vec<(FullSolution, ObjectiveVector)>, CapExceeded> {
    check_cap(instance, cap)?;
    let mut e = Enumerator {
        instance,
        committees: Vec::new(),
        placements: Vec::new(),
        out: Vec::new(),
    };
    e.defence(0);
    Ok(e.out)
}

/// Rank-0 of [`enumerate_all`]; payloads are enumeration indices.
pub fn oracle_front(instance: &Instance, cap: u128) -> Result<FrontArchive, CapExceeded> {
    let all = enumerate_all(instance, cap)?;
    Ok(front_of(&all))
}

/// Rank-0 filter of an enumeration (payload = index).
pub fn front_of(solutions: &[(FullSolution, ObjectiveVector)]) -> FrontArchive {
    FrontArchive::new(
        solutions
            .iter()
            .enumerate()
            .map(|(k, (_, z))| ArchiveEntry { objectives: z.clone(), payload: k as u64 })
            .collect(),
    )
    .nondominated()
}

/// Every committee configuration satisfying the stage-one invariants.
pub fn enumerate_configs(instance: &Instance, cap: u128) -> Result<Vec<CommitteeConfig>, CapExceeded> {
    let mut size: u128 = 1;
    for j in 0..instance.n_defences() {
        for t in 0..instance.n_roles() {
            size = size.saturating_mul(instance.eligible(j, t).len() as u128);
        }
    }
    if size > cap {
        return Err(CapExceeded { size, cap });
    }
    let per_defence: Vec<Vec<Vec<usize>>> = (0..instance.n_defences())
        .map(|j| {
            let mut found = Vec::new();
            let mut stack = vec![Vec::new()];
            while let Some(partial) = stack.pop() {
                if partial.len() == instance.n_roles() {
                    if CommitteeConfig::committee_is_feasible(instance, j, &partial) {
                        found.push(partial);
                    }
                    continue;
                }
                for &i in instance.eligible(j, partial.len()).iter().rev() {
                    let mut next = partial.clone();
                    next.push(i);
                    stack.push(next);
                }
            }
            found
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; per_defence.len()];
    if per_defence.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let committees: Vec<Vec<usize>> =
            pick.iter().enumerate().map(|(j, &c)| per_defence[j][c].clone()).collect();
        out.push(CommitteeConfig::from_committees(&committees));
        let mut k = pick.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < per_defence[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}
