//! Random instances shaped like the published benchmark sizes.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Dimensions, Instance, InstanceData, ModelError, Penalty};

pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub members: usize,
    pub defences: usize,
    pub roles: usize,
    /// Leading roles with a single eligible member (e.g. the supervisor).
    pub preassigned: usize,
    pub days: usize,
    pub slots_per_day: usize,
    pub rooms: usize,
    pub subjects: usize,
    pub duration: usize,
    /// Probability that a member is available on a given day; an available
    /// day is a contiguous block of at least `duration` slots.
    pub availability_density: f64,
    /// Probability that a member is eligible for a selected role.
    pub eligibility_density: f64,
    /// Probability that an available slot carries a unit penalty.
    pub penalty_density: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneratorError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("no instance with a feasible committee for every defence after {attempts} attempts; defences {last_unschedulable:?} failed last")]
    Unsatisfiable { attempts: usize, last_unschedulable: Vec<usize> },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl GeneratorSpec {
    /// At most 6 members, 3 defences and 2 rooms; sized for the brute-force oracle.
    pub fn tiny(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7469_6e79);
        GeneratorSpec {
            members: rng.gen_range(5..=6),
            defences: 3,
            roles: 2,
            preassigned: 1,
            days: rng.gen_range(1..=2),
            slots_per_day: rng.gen_range(3..=4),
            rooms: rng.gen_range(1..=2),
            subjects: 3,
            duration: rng.gen_range(1..=2),
            availability_density: 0.8,
            eligibility_density: 0.7,
            penalty_density: 0.4,
            seed,
        }
    }

    /// 25 members, 20 defences, two preassigned roles and one to select.
    pub fn small(seed: u64) -> Self {
        GeneratorSpec {
            members: 25,
            defences: 20,
            roles: 3,
            preassigned: 2,
            days: 4,
            slots_per_day: 10,
            rooms: 2,
            subjects: 8,
            duration: 2,
            availability_density: 0.6,
            eligibility_density: 0.3,
            penalty_density: 0.1,
            seed,
        }
    }

    /// 50 members, 40 defences, one preassigned role and two to select.
    pub fn large(seed: u64) -> Self {
        GeneratorSpec {
            members: 50,
            defences: 40,
            roles: 3,
            preassigned: 1,
            days: 8,
            slots_per_day: 10,
            rooms: 3,
            subjects: 10,
            duration: 2,
            availability_density: 0.6,
            eligibility_density: 0.2,
            penalty_density: 0.1,
            seed,
        }
    }

    /// 47 members, 36 defences, 3 roles, 16 days of 31 slots, 2 rooms, 4-slot defences.
    pub fn case_study(seed: u64) -> Self {
        GeneratorSpec {
            members: 47,
            defences: 36,
            roles: 3,
            preassigned: 1,
            days: 16,
            slots_per_day: 31,
            rooms: 2,
            subjects: 12,
            duration: 4,
            availability_density: 0.5,
            eligibility_density: 0.15,
            penalty_density: 0.1,
            seed,
        }
    }

    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        match name {
            "tiny" => Some(Self::tiny(seed)),
            "small" => Some(Self::small(seed)),
            "large" => Some(Self::large(seed)),
            "case-study" | "casestudy" => Some(Self::case_study(seed)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |m: String| Err(GeneratorError::InvalidSpec(m));
        for (name, v) in [
            ("availability_density", self.availability_density),
            ("eligibility_density", self.eligibility_density),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(alloc::format!("{name} must lie in (0, 1], got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&self.penalty_density) {
            return bad(alloc::format!("penalty_density must lie in [0, 1], got {}", self.penalty_density));
        }
        if self.preassigned >= self.roles {
            return bad(alloc::format!(
                "preassigned roles ({}) must be fewer than roles ({})",
                self.preassigned,
                self.roles
            ));
        }
        if self.roles > self.members {
            return bad(alloc::format!("{} roles need at least as many members", self.roles));
        }
        if self.subjects == 0 {
            return bad("at least one subject is needed".into());
        }
        Ok(())
    }

    pub fn dimensions(&self) -> Dimensions {
        Dimensions {
            members: self.members,
            defences: self.defences,
            roles: self.roles,
            days: self.days,
            slots_per_day: self.slots_per_day,
            rooms: self.rooms,
            subjects: self.subjects,
            duration: self.duration,
        }
    }
}

fn sample_subjects<R: Rng>(rng: &mut R, subjects: usize, max: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=max.min(subjects));
    let mut all: Vec<usize> = (0..subjects).collect();
    all.shuffle(rng);
    all.truncate(k);
    all.sort_unstable();
    all
}

fn sample_data<R: Rng>(spec: &GeneratorSpec, rng: &mut R) -> InstanceData {
    let mut availability = Vec::with_capacity(spec.members);
    let mut penalties = Vec::new();
    for member in 0..spec.members {
        let mut slots = Vec::new();
        for day in 0..spec.days {
            if !rng.gen_bool(spec.availability_density) {
                continue;
            }
            let len = rng.gen_range(spec.duration..=spec.slots_per_day);
            let first = rng.gen_range(0..=spec.slots_per_day - len);
            for slot in first..first + len {
                slots.push((day, slot));
                if rng.gen_bool(spec.penalty_density) {
                    penalties.push(Penalty { member, day, slot, value: 1 });
                }
            }
        }
        availability.push(slots);
    }

    let mut eligibility = Vec::with_capacity(spec.defences);
    for _ in 0..spec.defences {
        let mut members: Vec<usize> = (0..spec.members).collect();
        members.shuffle(rng);
        let fixed = &members[..spec.preassigned];
        let mut roles: Vec<Vec<usize>> = fixed.iter().map(|&i| alloc::vec![i]).collect();
        for _ in spec.preassigned..spec.roles {
            let mut pool: Vec<usize> = (0..spec.members)
                .filter(|i| !fixed.contains(i) && rng.gen_bool(spec.eligibility_density))
                .collect();
            if pool.is_empty() {
                let free: Vec<usize> = (0..spec.members).filter(|i| !fixed.contains(i)).collect();
                pool.push(*free.choose(rng).expect("more members than preassigned roles"));
            }
            roles.push(pool);
        }
        eligibility.push(roles);
    }

    let member_expertise = (0..spec.members).map(|_| sample_subjects(rng, spec.subjects, 3)).collect();
    let defence_subjects = (0..spec.defences).map(|_| sample_subjects(rng, spec.subjects, 2)).collect();
    InstanceData { eligibility, availability, member_expertise, defence_subjects, penalties }
}

/// Samples instances until every defence admits a committee with a common
/// window, giving up after [`MAX_ATTEMPTS`].
pub fn generate_instance(spec: &GeneratorSpec) -> Result<Instance, GeneratorError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut last = Vec::new();
    for _ in 0..MAX_ATTEMPTS {
        let instance = Instance::new(spec.dimensions(), sample_data(spec, &mut rng))?;
        last = instance.unschedulable_defences();
        if last.is_empty() {
            return Ok(instance);
        }
    }
    Err(GeneratorError::Unsatisfiable { attempts: MAX_ATTEMPTS, last_unschedulable: last })
}
