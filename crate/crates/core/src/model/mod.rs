//! Domain types, feasibility checking and the five objective evaluators.
//!
//! All ids are zero-based inside the crate. Objective values use a single
//! maximisation convention: objectives that are minimised (workload balance,
//! slot preferences, committee days) are stored negated.

mod eval;
mod feasibility;
mod slots;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use eval::{
    eval_z1_workload, eval_z2_suitability, eval_z3_preferences, eval_z4_days, eval_z5_proxy,
    evaluate, evaluate_config,
};
pub use feasibility::{check_feasible, FeasibilityReport, Violation};
pub use slots::{Calendar, SlotMask};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{field} must be positive")]
    ZeroDimension { field: &'static str },
    #[error("defence duration {duration} exceeds the {slots_per_day} slots of a day")]
    DurationTooLong { duration: usize, slots_per_day: usize },
    #[error("{field}: index {index} out of range (expected < {bound})")]
    IndexOutOfRange { field: String, index: usize, bound: usize },
    #[error("{field}: expected {expected} entries, found {found}")]
    WrongLength { field: String, expected: usize, found: usize },
    #[error("eligibility of defence {defence} role {role} is empty")]
    EmptyEligibility { defence: usize, role: usize },
    #[error("no feasible committee with a common window exists for defences {defences:?}")]
    Unschedulable { defences: Vec<usize> },
    #[error("objective {0} needs a schedule and cannot be evaluated on a committee configuration")]
    NeedsSchedule(Objective),
    #[error("malformed solution: {0}")]
    MalformedSolution(String),
}

/// Objective identifiers. `Z1`..`Z4` form the monolithic problem, `Z5` is
/// the stage-one proxy for schedule flexibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Objective {
    Z1,
    Z2,
    Z3,
    Z4,
    Z5,
}

impl Objective {
    pub const ALL: [Objective; 5] =
        [Objective::Z1, Objective::Z2, Objective::Z3, Objective::Z4, Objective::Z5];

    /// Objectives that only depend on the committee configuration.
    pub fn is_committee_objective(self) -> bool {
        matches!(self, Objective::Z1 | Objective::Z2 | Objective::Z5)
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Z1 => "z1",
            Objective::Z2 => "z2",
            Objective::Z3 => "z3",
            Objective::Z4 => "z4",
            Objective::Z5 => "z5",
        }
    }

    pub fn parse(name: &str) -> Option<Objective> {
        Objective::ALL.into_iter().find(|o| o.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The four objectives of the monolithic problem and of reported fronts.
pub const MONOLITHIC_OBJECTIVES: [Objective; 4] =
    [Objective::Z1, Objective::Z2, Objective::Z3, Objective::Z4];
/// Committee-assignment stage: workload, suitability and the proxy.
pub const STAGE1_OBJECTIVES: [Objective; 3] = [Objective::Z1, Objective::Z2, Objective::Z5];
/// Scheduling stage with fixed committees.
pub const STAGE2_OBJECTIVES: [Objective; 2] = [Objective::Z3, Objective::Z4];

/// Objective values in maximisation convention, ordered like the objective
/// set of the stage that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ObjectiveVector(pub Vec<i64>);

impl ObjectiveVector {
    pub fn new(values: Vec<i64>) -> Self {
        ObjectiveVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl core::ops::Index<usize> for ObjectiveVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl AsRef<[i64]> for ObjectiveVector {
    fn as_ref(&self) -> &[i64] {
        &self.0
    }
}

/// Size parameters of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dimensions {
    pub members: usize,
    pub defences: usize,
    pub roles: usize,
    pub days: usize,
    pub slots_per_day: usize,
    pub rooms: usize,
    pub subjects: usize,
    pub duration: usize,
}

/// A nonzero entry of the penalty tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Penalty {
    pub member: usize,
    pub day: usize,
    pub slot: usize,
    pub value: u32,
}

/// Raw instance contents before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceData {
    /// `eligibility[defence][role]` lists the members allowed in that role.
    pub eligibility: Vec<Vec<Vec<usize>>>,
    /// Per member, the `(day, slot)` pairs in which they are available.
    pub availability: Vec<Vec<(usize, usize)>>,
    pub member_expertise: Vec<Vec<usize>>,
    pub defence_subjects: Vec<Vec<usize>>,
    pub penalties: Vec<Penalty>,
}

/// A validated problem instance. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    dims: Dimensions,
    calendar: Calendar,
    eligibility: Vec<Vec<Vec<usize>>>,
    availability: Vec<SlotMask>,
    member_expertise: Vec<Vec<usize>>,
    defence_subjects: Vec<Vec<usize>>,
    /// `[member][flat slot]`
    penalties: Vec<u32>,
}

fn check_index(field: impl FnOnce() -> String, index: usize, bound: usize) -> Result<(), ModelError> {
    if index < bound {
        Ok(())
    } else {
        Err(ModelError::IndexOutOfRange { field: field(), index, bound })
    }
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Instance {
    /// Validates structure and index ranges. Does not check that every
    /// defence admits a committee with a common window; see
    /// [`Instance::unschedulable_defences`].
    pub fn new(dims: Dimensions, data: InstanceData) -> Result<Self, ModelError> {
        use alloc::format;
        for (field, value) in [
            ("members", dims.members),
            ("defences", dims.defences),
            ("roles", dims.roles),
            ("days", dims.days),
            ("slots_per_day", dims.slots_per_day),
            ("rooms", dims.rooms),
            ("duration", dims.duration),
        ] {
            if value == 0 {
                return Err(ModelError::ZeroDimension { field });
            }
        }
        if dims.duration > dims.slots_per_day {
            return Err(ModelError::DurationTooLong {
                duration: dims.duration,
                slots_per_day: dims.slots_per_day,
            });
        }
        let calendar =
            Calendar { days: dims.days, slots_per_day: dims.slots_per_day, duration: dims.duration };
        let total = calendar.total_slots();

        let wrong_len = |field: &str, expected: usize, found: usize| ModelError::WrongLength {
            field: String::from(field),
            expected,
            found,
        };
        if data.eligibility.len() != dims.defences {
            return Err(wrong_len("eligibility", dims.defences, data.eligibility.len()));
        }
        let mut eligibility = Vec::with_capacity(dims.defences);
        for (j, roles) in data.eligibility.into_iter().enumerate() {
            if roles.len() != dims.roles {
                return Err(wrong_len(&format!("eligibility[{j}]"), dims.roles, roles.len()));
            }
            let mut per_role = Vec::with_capacity(dims.roles);
            for (t, members) in roles.into_iter().enumerate() {
                for &i in &members {
                    check_index(|| format!("eligibility[{j}][{t}]"), i, dims.members)?;
                }
                let members = sorted_unique(members);
                if members.is_empty() {
                    return Err(ModelError::EmptyEligibility { defence: j, role: t });
                }
                per_role.push(members);
            }
            eligibility.push(per_role);
        }

        if data.availability.len() != dims.members {
            return Err(wrong_len("availability", dims.members, data.availability.len()));
        }
        let mut availability = Vec::with_capacity(dims.members);
        for (i, slots) in data.availability.iter().enumerate() {
            let mut mask = SlotMask::empty(total);
            for &(k, l) in slots {
                check_index(|| format!("availability[{i}].day"), k, dims.days)?;
                check_index(|| format!("availability[{i}].slot"), l, dims.slots_per_day)?;
                mask.insert(calendar.index(k, l));
            }
            availability.push(mask);
        }

        if data.member_expertise.len() != dims.members {
            return Err(wrong_len("member_expertise", dims.members, data.member_expertise.len()));
        }
        if data.defence_subjects.len() != dims.defences {
            return Err(wrong_len("defence_subjects", dims.defences, data.defence_subjects.len()));
        }
        let mut member_expertise = Vec::with_capacity(dims.members);
        for (i, subjects) in data.member_expertise.into_iter().enumerate() {
            for &q in &subjects {
                check_index(|| format!("member_expertise[{i}]"), q, dims.subjects)?;
            }
            member_expertise.push(sorted_unique(subjects));
        }
        let mut defence_subjects = Vec::with_capacity(dims.defences);
        for (j, subjects) in data.defence_subjects.into_iter().enumerate() {
            for &q in &subjects {
                check_index(|| format!("defence_subjects[{j}]"), q, dims.subjects)?;
            }
            defence_subjects.push(sorted_unique(subjects));
        }

        let mut penalties = alloc::vec![0u32; dims.members * total];
        for (n, p) in data.penalties.iter().enumerate() {
            check_index(|| format!("penalties[{n}].member"), p.member, dims.members)?;
            check_index(|| format!("penalties[{n}].day"), p.day, dims.days)?;
            check_index(|| format!("penalties[{n}].slot"), p.slot, dims.slots_per_day)?;
            penalties[p.member * total + calendar.index(p.day, p.slot)] = p.value;
        }

        Ok(Instance {
            dims,
            calendar,
            eligibility,
            availability,
            member_expertise,
            defence_subjects,
            penalties,
        })
    }

    /// Like [`Instance::new`] but additionally rejects instances in which a
    /// defence admits no committee with a common window of `duration` slots.
    pub fn new_checked(dims: Dimensions, data: InstanceData) -> Result<Self, ModelError> {
        let instance = Instance::new(dims, data)?;
        let bad = instance.unschedulable_defences();
        if bad.is_empty() {
            Ok(instance)
        } else {
            Err(ModelError::Unschedulable { defences: bad })
        }
    }

    /// Converts back to raw data (used by serializers).
    pub fn to_data(&self) -> InstanceData {
        let availability = self
            .availability
            .iter()
            .map(|mask| mask.iter().map(|s| self.calendar.day_slot(s)).collect())
            .collect();
        let total = self.calendar.total_slots();
        let mut penalties = Vec::new();
        for member in 0..self.dims.members {
            for s in 0..total {
                let value = self.penalties[member * total + s];
                if value > 0 {
                    let (day, slot) = self.calendar.day_slot(s);
                    penalties.push(Penalty { member, day, slot, value });
                }
            }
        }
        InstanceData {
            eligibility: self.eligibility.clone(),
            availability,
            member_expertise: self.member_expertise.clone(),
            defence_subjects: self.defence_subjects.clone(),
            penalties,
        }
    }

    pub fn dims(&self) -> &Dimensions {
        &self.dims
    }
    pub fn calendar(&self) -> &Calendar {
        &self.calendar
    }
    pub fn n_members(&self) -> usize {
        self.dims.members
    }
    pub fn n_defences(&self) -> usize {
        self.dims.defences
    }
    pub fn n_roles(&self) -> usize {
        self.dims.roles
    }
    pub fn n_days(&self) -> usize {
        self.dims.days
    }
    pub fn n_slots_per_day(&self) -> usize {
        self.dims.slots_per_day
    }
    pub fn n_rooms(&self) -> usize {
        self.dims.rooms
    }
    pub fn n_subjects(&self) -> usize {
        self.dims.subjects
    }
    pub fn duration(&self) -> usize {
        self.dims.duration
    }

    pub fn eligible(&self, defence: usize, role: usize) -> &[usize] {
        &self.eligibility[defence][role]
    }

    pub fn availability(&self, member: usize) -> &SlotMask {
        &self.availability[member]
    }

    pub fn member_expertise(&self, member: usize) -> &[usize] {
        &self.member_expertise[member]
    }

    pub fn defence_subjects(&self, defence: usize) -> &[usize] {
        &self.defence_subjects[defence]
    }

    /// Penalty of `member` for the flat slot index.
    #[inline]
    pub fn penalty(&self, member: usize, slot: usize) -> u32 {
        self.penalties[member * self.calendar.total_slots() + slot]
    }

    pub fn total_penalty(&self) -> u64 {
        self.penalties.iter().map(|&p| u64::from(p)).sum()
    }

    /// Penalty accrued by `member` over the window of a defence starting at `start`.
    pub fn window_penalty(&self, member: usize, start: usize) -> i64 {
        self.calendar.window(start).map(|s| i64::from(self.penalty(member, s))).sum()
    }

    /// `|Cm[member] ∩ Cd[defence]|`
    pub fn suitability(&self, member: usize, defence: usize) -> i64 {
        let (a, b) = (&self.member_expertise[member], &self.defence_subjects[defence]);
        let (mut x, mut y, mut n) = (0, 0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                core::cmp::Ordering::Less => x += 1,
                core::cmp::Ordering::Greater => y += 1,
                core::cmp::Ordering::Equal => {
                    n += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        n
    }

    /// Slots in which every listed member is available.
    pub fn common_availability(&self, members: &[usize]) -> SlotMask {
        let mut mask = SlotMask::full(self.calendar.total_slots());
        for &i in members {
            mask.intersect_with(&self.availability[i]);
        }
        mask
    }

    /// Feasible window starts for a committee.
    pub fn committee_window_starts(&self, members: &[usize]) -> Vec<usize> {
        self.calendar.window_starts(&self.common_availability(members))
    }

    /// Whether some assignment of distinct eligible members to the roles of
    /// `defence` shares a window of `duration` slots.
    pub fn defence_is_schedulable(&self, defence: usize) -> bool {
        let mut chosen = Vec::with_capacity(self.dims.roles);
        let full = SlotMask::full(self.calendar.total_slots());
        self.committee_exists(defence, 0, &mut chosen, &full)
    }

    fn committee_exists(
        &self,
        defence: usize,
        role: usize,
        chosen: &mut Vec<usize>,
        common: &SlotMask,
    ) -> bool {
        if role == self.dims.roles {
            return true;
        }
        for &i in self.eligible(defence, role) {
            if chosen.contains(&i) {
                continue;
            }
            let mut next = common.clone();
            next.intersect_with(&self.availability[i]);
            if !self.calendar.has_window(&next) {
                continue;
            }
            chosen.push(i);
            let found = self.committee_exists(defence, role + 1, chosen, &next);
            chosen.pop();
            if found {
                return true;
            }
        }
        false
    }

    pub fn unschedulable_defences(&self) -> Vec<usize> {
        (0..self.dims.defences).filter(|&j| !self.defence_is_schedulable(j)).collect()
    }

    /// The stage-two view of the instance: every role of every defence is
    /// restricted to the member chosen by `config`.
    pub fn with_fixed_committees(&self, config: &CommitteeConfig) -> Instance {
        let mut fixed = self.clone();
        for j in 0..self.dims.defences {
            for (t, &i) in config.committee(j).iter().enumerate() {
                fixed.eligibility[j][t] = alloc::vec![i];
            }
        }
        fixed
    }
}

/// One member per (defence, role): the chromosome of the committee search
/// and the partial solution handed to the scheduling stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommitteeConfig {
    roles: usize,
    members: Vec<usize>,
}

impl CommitteeConfig {
    /// Builds a config from per-defence committees.
    pub fn from_committees(committees: &[Vec<usize>]) -> Self {
        let roles = committees.first().map_or(0, Vec::len);
        debug_assert!(committees.iter().all(|c| c.len() == roles));
        CommitteeConfig { roles, members: committees.iter().flatten().copied().collect() }
    }

    pub fn from_flat(roles: usize, members: Vec<usize>) -> Self {
        debug_assert!(roles == 0 || members.len().is_multiple_of(roles));
        CommitteeConfig { roles, members }
    }

    pub fn n_defences(&self) -> usize {
        self.members.len().checked_div(self.roles).unwrap_or(0)
    }

    pub fn n_roles(&self) -> usize {
        self.roles
    }

    pub fn committee(&self, defence: usize) -> &[usize] {
        &self.members[defence * self.roles..(defence + 1) * self.roles]
    }

    pub fn set_committee(&mut self, defence: usize, committee: &[usize]) {
        self.members[defence * self.roles..(defence + 1) * self.roles].copy_from_slice(committee);
    }

    pub fn genes(&self) -> &[usize] {
        &self.members
    }

    pub fn committees(&self) -> impl Iterator<Item = &[usize]> {
        self.members.chunks(self.roles.max(1))
    }

    /// Checks the shape against the instance; index errors are malformed-solution errors.
    pub fn check_shape(&self, instance: &Instance) -> Result<(), ModelError> {
        if self.roles != instance.n_roles() || self.n_defences() != instance.n_defences() {
            return Err(ModelError::MalformedSolution(alloc::format!(
                "committee configuration has {} defences x {} roles, instance has {} x {}",
                self.n_defences(),
                self.roles,
                instance.n_defences(),
                instance.n_roles()
            )));
        }
        for (n, &i) in self.members.iter().enumerate() {
            if i >= instance.n_members() {
                return Err(ModelError::MalformedSolution(alloc::format!(
                    "defence {} role {}: member {} out of range",
                    n / self.roles,
                    n % self.roles,
                    i
                )));
            }
        }
        Ok(())
    }

    /// Stage-one feasibility of a single committee: eligibility, distinct
    /// members and a common window of `duration` slots.
    pub fn committee_is_feasible(instance: &Instance, defence: usize, committee: &[usize]) -> bool {
        for (t, &i) in committee.iter().enumerate() {
            if instance.eligible(defence, t).binary_search(&i).is_err() {
                return false;
            }
            if committee[..t].contains(&i) {
                return false;
            }
        }
        instance.calendar().has_window(&instance.common_availability(committee))
    }

    /// All committee invariants hold.
    pub fn is_feasible(&self, instance: &Instance) -> bool {
        self.check_shape(instance).is_ok()
            && (0..self.n_defences())
                .all(|j| Self::committee_is_feasible(instance, j, self.committee(j)))
    }
}

/// Start of a defence: day, first slot and room (all zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub day: usize,
    pub slot: usize,
    pub room: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule(pub Vec<Placement>);

impl Schedule {
    pub fn placement(&self, defence: usize) -> Placement {
        self.0[defence]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FullSolution {
    pub config: CommitteeConfig,
    pub schedule: Schedule,
}

impl FullSolution {
    pub fn check_shape(&self, instance: &Instance) -> Result<(), ModelError> {
        self.config.check_shape(instance)?;
        if self.schedule.0.len() != instance.n_defences() {
            return Err(ModelError::MalformedSolution(alloc::format!(
                "schedule has {} placements for {} defences",
                self.schedule.0.len(),
                instance.n_defences()
            )));
        }
        for (j, p) in self.schedule.0.iter().enumerate() {
            let bad = if p.day >= instance.n_days() {
                Some(("day", p.day, instance.n_days()))
            } else if p.slot >= instance.n_slots_per_day() {
                Some(("slot", p.slot, instance.n_slots_per_day()))
            } else if p.room >= instance.n_rooms() {
                Some(("room", p.room, instance.n_rooms()))
            } else {
                None
            };
            if let Some((field, index, bound)) = bad {
                return Err(ModelError::MalformedSolution(alloc::format!(
                    "defence {j}: {field} {index} out of range (expected < {bound})"
                )));
            }
        }
        Ok(())
    }

    /// Flat index of the first slot of `defence`.
    pub fn start_index(&self, instance: &Instance, defence: usize) -> usize {
        let p = self.schedule.placement(defence);
        instance.calendar().index(p.day, p.slot)
    }
}
