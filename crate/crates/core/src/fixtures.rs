//! Hand-made instances shared by tests, examples and the CLI fixtures.

use alloc::vec;

use crate::model::{Dimensions, Instance, InstanceData, Penalty};

/// The canonical tiny instance: four members, two defences of two slots,
/// one day of four slots and one room. Role 0 is preassigned (defence 0 to
/// member 0, defence 1 to member 1); role 1 is open to members 2 and 3.
/// Member 2 is available in slots 0-1 only, member 3 in slots 2-3 only, and
/// member 2 dislikes slot 0.
pub fn t1() -> Instance {
    let dims = Dimensions {
        members: 4,
        defences: 2,
        roles: 2,
        days: 1,
        slots_per_day: 4,
        rooms: 1,
        subjects: 2,
        duration: 2,
    };
    let all = vec![(0, 0), (0, 1), (0, 2), (0, 3)];
    let data = InstanceData {
        eligibility: vec![vec![vec![0], vec![2, 3]], vec![vec![1], vec![2, 3]]],
        availability: vec![all.clone(), all, vec![(0, 0), (0, 1)], vec![(0, 2), (0, 3)]],
        member_expertise: vec![vec![], vec![], vec![0], vec![0, 1]],
        defence_subjects: vec![vec![0], vec![1]],
        penalties: vec![Penalty { member: 2, day: 0, slot: 0, value: 1 }],
    };
    Instance::new(dims, data).expect("T1 is well formed")
}

/// The first `count` tiny random instances (by seed) that fit the oracle cap
/// and admit at least one feasible full solution.
pub fn tiny_suite(count: usize) -> alloc::vec::Vec<Instance> {
    use crate::generator::{generate_instance, GeneratorSpec};
    use crate::oracle::{enumerate_all, DEFAULT_CAP};
    let mut out = alloc::vec::Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        if let Ok(inst) = generate_instance(&GeneratorSpec::tiny(seed)) {
            if enumerate_all(&inst, DEFAULT_CAP).is_ok_and(|all| !all.is_empty()) {
                out.push(inst);
            }
        }
        seed += 1;
    }
    out
}
