use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::{
    Deadline, ProblemKind, Scalarization, SearchStats, SolveRequest, SolveResult, Solved, Status,
    CHECK_INTERVAL,
};
use crate::model::{
    CommitteeConfig, FullSolution, Instance, Objective, ObjectiveVector, Placement, Schedule,
};

/// A fixed decision for one defence in a partial assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub committee: Vec<usize>,
    /// Ignored (and may be `None`) for committee-only problems.
    pub placement: Option<Placement>,
}

const NO_START: u32 = u32::MAX;

struct Committee {
    members: Vec<usize>,
    suit: i64,
    proxy: i64,
}

#[derive(Clone, Copy)]
struct Opt {
    committee: u32,
    start: u32,
    room: u32,
    day: u32,
    penalty: i64,
}

/// Candidate decisions of one defence plus the forward-checking counters.
struct Domain {
    committees: Vec<Committee>,
    options: Vec<Opt>,
    /// Offsets into `options` per start slot; options are sorted by start.
    by_start: Vec<u32>,
    by_penalty: Vec<u32>,
    by_suit: Vec<u32>,
    by_proxy: Vec<u32>,
    /// Per role, the member shared by every committee, if any.
    fixed: Vec<Option<usize>>,
    /// Per role, the distinct members appearing in some committee.
    role_pool: Vec<Vec<usize>>,
    blocked: Vec<u16>,
    alive: usize,
    alive_by_day: Vec<u32>,
    committee_alive: Vec<u32>,
}

fn enumerate_committees(instance: &Instance, defence: usize) -> Vec<Vec<usize>> {
    fn rec(
        instance: &Instance,
        defence: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let role = chosen.len();
        if role == instance.n_roles() {
            if instance.calendar().has_window(&instance.common_availability(chosen)) {
                out.push(chosen.clone());
            }
            return;
        }
        for &i in instance.eligible(defence, role) {
            if !chosen.contains(&i) {
                chosen.push(i);
                rec(instance, defence, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(instance, defence, &mut Vec::with_capacity(instance.n_roles()), &mut out);
    out
}

impl Domain {
    fn build(instance: &Instance, defence: usize, committees: Vec<Vec<usize>>, schedules: bool) -> Self {
        let cal = instance.calendar();
        let total = cal.total_slots();
        let committees: Vec<Committee> = committees
            .into_iter()
            .map(|members| Committee {
                suit: members.iter().map(|&i| instance.suitability(i, defence)).sum(),
                proxy: instance.common_availability(&members).count() as i64,
                members,
            })
            .collect();

        let mut options = Vec::new();
        for (c, com) in committees.iter().enumerate() {
            if !schedules {
                options.push(Opt { committee: c as u32, start: NO_START, room: 0, day: 0, penalty: 0 });
                continue;
            }
            for start in instance.committee_window_starts(&com.members) {
                let penalty = com.members.iter().map(|&i| instance.window_penalty(i, start)).sum();
                for room in 0..instance.n_rooms() {
                    options.push(Opt {
                        committee: c as u32,
                        start: start as u32,
                        room: room as u32,
                        day: (start / cal.slots_per_day) as u32,
                        penalty,
                    });
                }
            }
        }
        let mut by_start = Vec::new();
        if schedules {
            options.sort_by_key(|o| (o.start, o.committee, o.room));
            by_start = vec![0u32; total + 1];
            for o in &options {
                by_start[o.start as usize + 1] += 1;
            }
            for s in 0..total {
                by_start[s + 1] += by_start[s];
            }
        }

        let mut by_penalty: Vec<u32> = (0..options.len() as u32).collect();
        by_penalty.sort_by_key(|&o| (options[o as usize].penalty, o));
        let mut by_suit: Vec<u32> = (0..committees.len() as u32).collect();
        by_suit.sort_by_key(|&c| (Reverse(committees[c as usize].suit), c));
        let mut by_proxy: Vec<u32> = (0..committees.len() as u32).collect();
        by_proxy.sort_by_key(|&c| (Reverse(committees[c as usize].proxy), c));

        let roles = instance.n_roles();
        let mut fixed = vec![None; roles];
        let mut role_pool = vec![Vec::new(); roles];
        for t in 0..roles {
            let mut pool: Vec<usize> = committees.iter().map(|c| c.members[t]).collect();
            pool.sort_unstable();
            pool.dedup();
            if pool.len() == 1 {
                fixed[t] = Some(pool[0]);
            }
            role_pool[t] = pool;
        }

        let mut alive_by_day = vec![0u32; instance.n_days()];
        let mut committee_alive = vec![0u32; committees.len()];
        for o in &options {
            alive_by_day[o.day as usize] += 1;
            committee_alive[o.committee as usize] += 1;
        }
        Domain {
            blocked: vec![0; options.len()],
            alive: options.len(),
            committees,
            options,
            by_start,
            by_penalty,
            by_suit,
            by_proxy,
            fixed,
            role_pool,
            alive_by_day,
            committee_alive,
        }
    }
}

type Key = (i64, i128);

pub(crate) struct Searcher<'a> {
    instance: &'a Instance,
    schedules: bool,
    objectives: Vec<Objective>,
    primary: Objective,
    /// Tie-breaking weights per objective (indexed by `Objective as usize`).
    weights: [i128; 5],
    epsilon: [Option<i64>; 5],
    domains: Vec<Domain>,
    assigned: Vec<Option<u32>>,
    n_assigned: usize,
    loads: Vec<i64>,
    member_day: Vec<u32>,
    days_used: Vec<i64>,
    z2: i64,
    z3: i64,
    z5: i64,
    trail: Vec<(u32, u32)>,
    best: Option<(Key, Vec<u32>)>,
    root_bound: Option<i64>,
    /// Minimise the primary objective alone (no bounds, no augmentation).
    minimise: bool,
    aborted: bool,
    stats: SearchStats,
}

fn slot(o: Objective) -> usize {
    o as usize
}

impl<'a> Searcher<'a> {
    pub(crate) fn new(instance: &'a Instance, request: &SolveRequest) -> Self {
        let schedules = request.kind.schedules();
        let domains = (0..instance.n_defences())
            .map(|j| {
                let committees = match &request.kind {
                    ProblemKind::Stage2(config) => vec![config.committee(j).to_vec()],
                    _ => enumerate_committees(instance, j),
                };
                Domain::build(instance, j, committees, schedules)
            })
            .collect();

        let mut weights = [0i128; 5];
        let others = request.objectives.iter().copied().filter(|o| *o != request.primary);
        match &request.scalarization {
            Scalarization::Perturbed => {
                for o in others {
                    weights[slot(o)] = 1;
                }
            }
            Scalarization::Augmented(ctx) => {
                let ranges: Vec<(Objective, i128)> = others
                    .map(|o| {
                        let (lo, hi) = ctx.range(o).unwrap_or((0, 0));
                        (o, i128::from(hi - lo))
                    })
                    .collect();
                // A collapsed range still gets a positive weight: payoff-table
                // ranges can be zero while the objective varies, and a zero
                // weight would let ties settle on dominated points.
                let ranges: Vec<(Objective, i128)> = ranges.into_iter().map(|(o, r)| (o, r.max(1))).collect();
                let product: i128 = ranges.iter().map(|(_, r)| *r).product();
                for (o, r) in ranges {
                    weights[slot(o)] = product / r;
                }
            }
        }
        let mut epsilon = [None; 5];
        for &(o, e) in &request.epsilon_bounds {
            epsilon[slot(o)] = Some(e);
        }

        Searcher {
            instance,
            schedules,
            objectives: request.objectives.clone(),
            primary: request.primary,
            weights,
            epsilon,
            domains,
            assigned: vec![None; instance.n_defences()],
            n_assigned: 0,
            loads: vec![0; instance.n_members()],
            member_day: vec![0; instance.n_members() * instance.n_days()],
            days_used: vec![0; instance.n_members()],
            z2: 0,
            z3: 0,
            z5: 0,
            trail: Vec::new(),
            best: None,
            root_bound: None,
            minimise: false,
            aborted: false,
            stats: SearchStats::default(),
        }
    }

    pub(crate) fn minimising(mut self) -> Self {
        self.minimise = true;
        self.weights = [0; 5];
        self.epsilon = [None; 5];
        self
    }

    fn active(&self, o: Objective) -> bool {
        self.objectives.contains(&o)
    }

    fn key(&self, values: &[i64; 5]) -> Key {
        if self.minimise {
            return (-values[slot(self.primary)], 0);
        }
        let secondary = values.iter().zip(&self.weights).map(|(&v, &w)| i128::from(v) * w).sum();
        (values[slot(self.primary)], secondary)
    }

    fn apply(&mut self, j: usize, o: u32) {
        let opt = self.domains[j].options[o as usize];
        let members = self.domains[j].committees[opt.committee as usize].members.clone();
        let days = self.instance.n_days();
        for &i in &members {
            self.loads[i] += 1;
            if self.schedules {
                let k = i * days + opt.day as usize;
                if self.member_day[k] == 0 {
                    self.days_used[i] += 1;
                }
                self.member_day[k] += 1;
            }
        }
        let com = &self.domains[j].committees[opt.committee as usize];
        self.z2 += com.suit;
        self.z5 += com.proxy;
        self.z3 -= opt.penalty;
        self.assigned[j] = Some(o);
        self.n_assigned += 1;

        if !self.schedules {
            return;
        }
        let spd = self.instance.n_slots_per_day();
        let d = self.instance.duration();
        let s = opt.start as usize;
        let day_start = (s / spd) * spd;
        let lo = (s + 1).saturating_sub(d).max(day_start);
        let hi = (s + d - 1).min(day_start + spd - 1);
        for j2 in 0..self.domains.len() {
            if self.assigned[j2].is_some() {
                continue;
            }
            let dom = &mut self.domains[j2];
            let range = dom.by_start[lo] as usize..dom.by_start[hi + 1] as usize;
            for o2 in range {
                let op = dom.options[o2];
                let clash = op.room == opt.room
                    || dom.committees[op.committee as usize].members.iter().any(|m| members.contains(m));
                if !clash {
                    continue;
                }
                dom.blocked[o2] += 1;
                if dom.blocked[o2] == 1 {
                    dom.alive -= 1;
                    dom.alive_by_day[op.day as usize] -= 1;
                    dom.committee_alive[op.committee as usize] -= 1;
                }
                self.trail.push((j2 as u32, o2 as u32));
            }
        }
    }

    fn undo(&mut self, j: usize, mark: usize) {
        while self.trail.len() > mark {
            let (j2, o2) = self.trail.pop().expect("trail above mark");
            let dom = &mut self.domains[j2 as usize];
            let o2 = o2 as usize;
            dom.blocked[o2] -= 1;
            if dom.blocked[o2] == 0 {
                let op = dom.options[o2];
                dom.alive += 1;
                dom.alive_by_day[op.day as usize] += 1;
                dom.committee_alive[op.committee as usize] += 1;
            }
        }
        let o = self.assigned[j].take().expect("undo of an unassigned defence");
        self.n_assigned -= 1;
        let opt = self.domains[j].options[o as usize];
        let com = &self.domains[j].committees[opt.committee as usize];
        self.z2 -= com.suit;
        self.z5 -= com.proxy;
        self.z3 += opt.penalty;
        let days = self.instance.n_days();
        for &i in &com.members {
            self.loads[i] -= 1;
            if self.schedules {
                let k = i * days + opt.day as usize;
                self.member_day[k] -= 1;
                if self.member_day[k] == 0 {
                    self.days_used[i] -= 1;
                }
            }
        }
    }

    fn exact_values(&self) -> [i64; 5] {
        [
            -self.loads.iter().map(|l| l * l).sum::<i64>(),
            self.z2,
            self.z3,
            -self.days_used.iter().map(|d| d * d).sum::<i64>(),
            self.z5,
        ]
    }

    /// Componentwise optimistic values over all completions of the current
    /// node. Requires every unassigned defence to have a live option.
    fn upper_bounds(&self) -> [i64; 5] {
        let mut ub = [0i64; 5];
        let (mut z2, mut z3, mut z5) = (self.z2, self.z3, self.z5);
        for (j, dom) in self.domains.iter().enumerate() {
            if self.assigned[j].is_some() {
                continue;
            }
            let best_committee = |order: &[u32]| {
                order.iter().copied().find(|&c| dom.committee_alive[c as usize] > 0)
            };
            if let Some(c) = best_committee(&dom.by_suit) {
                z2 += dom.committees[c as usize].suit;
            }
            if let Some(c) = best_committee(&dom.by_proxy) {
                z5 += dom.committees[c as usize].proxy;
            }
            if self.schedules {
                if let Some(&o) = dom.by_penalty.iter().find(|&&o| dom.blocked[o as usize] == 0) {
                    z3 -= dom.options[o as usize].penalty;
                }
            }
        }
        ub[slot(Objective::Z2)] = z2;
        ub[slot(Objective::Z3)] = z3;
        ub[slot(Objective::Z5)] = z5;
        if self.active(Objective::Z1) {
            ub[slot(Objective::Z1)] = self.workload_bound();
        }
        if self.schedules && self.active(Objective::Z4) {
            ub[slot(Objective::Z4)] = self.days_bound();
        }
        ub
    }

    /// Fixed roles load their member; free roles are water-filled onto the
    /// least loaded members of the union of their pools.
    fn workload_bound(&self) -> i64 {
        let mut loads = self.loads.clone();
        let mut in_pool = vec![false; loads.len()];
        let mut free = 0usize;
        for (j, dom) in self.domains.iter().enumerate() {
            if self.assigned[j].is_some() {
                continue;
            }
            for (t, fixed) in dom.fixed.iter().enumerate() {
                match fixed {
                    Some(i) => loads[*i] += 1,
                    None => {
                        free += 1;
                        for &i in &dom.role_pool[t] {
                            in_pool[i] = true;
                        }
                    }
                }
            }
        }
        let mut total: i64 = 0;
        let mut heap = BinaryHeap::new();
        for (i, &l) in loads.iter().enumerate() {
            if in_pool[i] {
                heap.push(Reverse(l));
            } else {
                total += l * l;
            }
        }
        for _ in 0..free {
            let Reverse(l) = heap.pop().expect("free role with an empty pool");
            heap.push(Reverse(l + 1));
        }
        total += heap.into_iter().map(|Reverse(l)| l * l).sum::<i64>();
        -total
    }

    /// A member fixed in some open defence that has no live option on a day
    /// the member already uses must gain at least one more day.
    fn days_bound(&self) -> i64 {
        let days = self.instance.n_days();
        let mut extra = vec![false; self.days_used.len()];
        for (j, dom) in self.domains.iter().enumerate() {
            if self.assigned[j].is_some() {
                continue;
            }
            for &i in dom.fixed.iter().flatten() {
                if extra[i] {
                    continue;
                }
                let shares_day = (0..days)
                    .any(|k| self.member_day[i * days + k] > 0 && dom.alive_by_day[k] > 0);
                if !shares_day {
                    extra[i] = true;
                }
            }
        }
        -self
            .days_used
            .iter()
            .zip(&extra)
            .map(|(&d, &e)| {
                let n = d + i64::from(e);
                n * n
            })
            .sum::<i64>()
    }

    /// Componentwise pessimistic values over all completions, used when
    /// minimising. Requires every unassigned defence to have a live option.
    fn lower_bounds(&self) -> [i64; 5] {
        let mut lb = [0i64; 5];
        let (mut z2, mut z3, mut z5) = (self.z2, self.z3, self.z5);
        let days = self.instance.n_days();
        let mut loads = self.loads.clone();
        let mut in_pool = vec![false; loads.len()];
        let mut open_for = vec![0i64; loads.len()];
        let mut free = 0i64;
        for (j, dom) in self.domains.iter().enumerate() {
            if self.assigned[j].is_some() {
                continue;
            }
            let worst_committee =
                |order: &[u32]| order.iter().rev().copied().find(|&c| dom.committee_alive[c as usize] > 0);
            if let Some(c) = worst_committee(&dom.by_suit) {
                z2 += dom.committees[c as usize].suit;
            }
            if let Some(c) = worst_committee(&dom.by_proxy) {
                z5 += dom.committees[c as usize].proxy;
            }
            if self.schedules {
                if let Some(&o) = dom.by_penalty.iter().rev().find(|&&o| dom.blocked[o as usize] == 0) {
                    z3 -= dom.options[o as usize].penalty;
                }
            }
            let mut touched: Vec<usize> = Vec::new();
            for (t, fixed) in dom.fixed.iter().enumerate() {
                match fixed {
                    Some(i) => {
                        loads[*i] += 1;
                        touched.push(*i);
                    }
                    None => {
                        free += 1;
                        for &i in &dom.role_pool[t] {
                            in_pool[i] = true;
                            touched.push(i);
                        }
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for i in touched {
                open_for[i] += 1;
            }
        }
        lb[slot(Objective::Z2)] = z2;
        lb[slot(Objective::Z3)] = z3;
        lb[slot(Objective::Z5)] = z5;
        // all free roles on the single pool member where they hurt most
        let base: i64 = loads.iter().map(|l| l * l).sum();
        let worst_gain = (0..loads.len())
            .filter(|&i| in_pool[i])
            .map(|i| (loads[i] + free) * (loads[i] + free) - loads[i] * loads[i])
            .max()
            .unwrap_or(0);
        lb[slot(Objective::Z1)] = -(base + worst_gain);
        lb[slot(Objective::Z4)] = -self
            .days_used
            .iter()
            .zip(&open_for)
            .map(|(&d, &u)| {
                let n = d + u.min(days as i64 - d);
                n * n
            })
            .sum::<i64>();
        lb
    }

    fn violates_epsilon(&self, values: &[i64; 5]) -> bool {
        self.epsilon.iter().zip(values).any(|(e, &v)| e.is_some_and(|e| v < e))
    }

    /// Increase of the squared day counts caused by option `o` of defence `j`.
    fn new_days(&self, j: usize, o: u32) -> i64 {
        let opt = self.domains[j].options[o as usize];
        let days = self.instance.n_days();
        self.domains[j].committees[opt.committee as usize]
            .members
            .iter()
            .filter(|&&i| self.member_day[i * days + opt.day as usize] == 0)
            .map(|&i| 2 * self.days_used[i] + 1)
            .sum()
    }

    fn option_key(&self, j: usize, o: u32) -> Key {
        let opt = self.domains[j].options[o as usize];
        let com = &self.domains[j].committees[opt.committee as usize];
        let days = self.instance.n_days();
        let mut delta = [0i64; 5];
        delta[slot(Objective::Z1)] = -com.members.iter().map(|&i| 2 * self.loads[i] + 1).sum::<i64>();
        delta[slot(Objective::Z2)] = com.suit;
        delta[slot(Objective::Z3)] = -opt.penalty;
        if self.schedules {
            delta[slot(Objective::Z4)] = -com
                .members
                .iter()
                .filter(|&&i| self.member_day[i * days + opt.day as usize] == 0)
                .map(|&i| 2 * self.days_used[i] + 1)
                .sum::<i64>();
        }
        delta[slot(Objective::Z5)] = com.proxy;
        self.key(&delta)
    }

    fn dfs(&mut self, deadline: &dyn Deadline) {
        self.stats.nodes += 1;
        if self.stats.nodes.is_multiple_of(CHECK_INTERVAL) && deadline.expired() {
            self.aborted = true;
        }
        if self.aborted {
            return;
        }
        if self.n_assigned == self.domains.len() {
            self.leaf();
            return;
        }
        let mut pick: Option<(usize, usize)> = None;
        for (j, dom) in self.domains.iter().enumerate() {
            if self.assigned[j].is_some() {
                continue;
            }
            if dom.alive == 0 {
                self.stats.dead_ends += 1;
                return;
            }
            if pick.is_none_or(|(_, a)| dom.alive < a) {
                pick = Some((j, dom.alive));
            }
        }
        let ub = if self.minimise { self.lower_bounds() } else { self.upper_bounds() };
        if self.root_bound.is_none() {
            self.root_bound = Some(ub[slot(self.primary)]);
        }
        if self.violates_epsilon(&ub) {
            self.stats.pruned_by_epsilon += 1;
            return;
        }
        if let Some((best, _)) = &self.best {
            if self.key(&ub) <= *best {
                self.stats.pruned_by_bound += 1;
                return;
            }
        }
        let (j, _) = pick.expect("an unassigned defence exists");
        let dom = &self.domains[j];
        // A bounded day count has a weak bound, so options that open no new
        // member day go first; otherwise dives end far below the bound.
        let days_first = self.schedules && self.epsilon[slot(Objective::Z4)].is_some();
        let mut order: Vec<((i64, Key), u32)> = (0..dom.options.len() as u32)
            .filter(|&o| dom.blocked[o as usize] == 0)
            .map(|o| {
                let days = if days_first { self.new_days(j, o) } else { 0 };
                ((-days, self.option_key(j, o)), o)
            })
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, o) in order {
            let mark = self.trail.len();
            self.apply(j, o);
            self.dfs(deadline);
            self.undo(j, mark);
            if self.aborted {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let values = self.exact_values();
        if self.violates_epsilon(&values) {
            self.stats.pruned_by_epsilon += 1;
            return;
        }
        let key = self.key(&values);
        if self.best.as_ref().is_none_or(|(b, _)| key > *b) {
            let choice = self.assigned.iter().map(|o| o.expect("leaf is complete")).collect();
            self.best = Some((key, choice));
            self.stats.incumbents += 1;
        }
    }

    fn project(&self, values: &[i64; 5]) -> ObjectiveVector {
        ObjectiveVector(self.objectives.iter().map(|&o| values[slot(o)]).collect())
    }

    fn rebuild(&self, choice: &[u32]) -> Solved {
        let mut committees = Vec::with_capacity(choice.len());
        let mut placements = Vec::with_capacity(choice.len());
        let cal = self.instance.calendar();
        for (j, &o) in choice.iter().enumerate() {
            let opt = self.domains[j].options[o as usize];
            committees.push(self.domains[j].committees[opt.committee as usize].members.clone());
            if self.schedules {
                let (day, slot) = cal.day_slot(opt.start as usize);
                placements.push(Placement { day, slot, room: opt.room as usize });
            }
        }
        let config = CommitteeConfig::from_flat(
            self.instance.n_roles(),
            committees.into_iter().flatten().collect(),
        );
        if self.schedules {
            Solved::Full(FullSolution { config, schedule: Schedule(placements) })
        } else {
            Solved::Committees(config)
        }
    }

    pub(crate) fn run(&mut self, deadline: &dyn Deadline) -> SolveResult {
        self.dfs(deadline);
        let best = self.best.take();
        let status = match (&best, self.aborted) {
            (Some(_), false) => Status::Optimal,
            (Some(_), true) => Status::FeasibleTimeout,
            (None, false) => Status::Infeasible,
            (None, true) => Status::Timeout,
        };
        let (solution, objectives, gap) = match best {
            Some((_, choice)) => {
                let solved = self.rebuild(&choice);
                let values = self.values_of(&choice);
                let primary = values[slot(self.primary)];
                let gap = match (status, self.root_bound) {
                    (Status::FeasibleTimeout, Some(bound)) => {
                        (bound - primary).abs() as f64 / primary.abs().max(1) as f64
                    }
                    _ => 0.0,
                };
                (Some(solved), Some(self.project(&values)), gap)
            }
            None => (None, None, 0.0),
        };
        log::debug!(
            "search finished: {} after {} nodes ({} bound prunes, {} epsilon prunes)",
            status.name(),
            self.stats.nodes,
            self.stats.pruned_by_bound,
            self.stats.pruned_by_epsilon
        );
        SolveResult { status, solution, objectives, gap, stats: self.stats.clone() }
    }

    fn values_of(&mut self, choice: &[u32]) -> [i64; 5] {
        let mut marks = Vec::with_capacity(choice.len());
        for (j, &o) in choice.iter().enumerate() {
            marks.push(self.trail.len());
            self.apply(j, o);
        }
        let values = self.exact_values();
        for j in (0..choice.len()).rev() {
            self.undo(j, marks[j]);
        }
        values
    }

    pub(crate) fn root_lower_bounds(&self) -> Option<ObjectiveVector> {
        if self.domains.iter().any(|d| d.alive == 0) {
            return None;
        }
        Some(self.project(&self.lower_bounds()))
    }

    pub(crate) fn bounds_for_partial(&mut self, partial: &[Option<super::Choice>]) -> Option<ObjectiveVector> {
        if partial.len() != self.domains.len() {
            return None;
        }
        let cal = *self.instance.calendar();
        for (j, choice) in partial.iter().enumerate() {
            let Some(choice) = choice else { continue };
            let dom = &self.domains[j];
            let found = (0..dom.options.len()).find(|&o| {
                let opt = dom.options[o];
                let same_committee = dom.committees[opt.committee as usize].members == choice.committee;
                let same_place = !self.schedules
                    || choice.placement.is_some_and(|p| {
                        p.day < cal.days
                            && p.slot < cal.slots_per_day
                            && cal.index(p.day, p.slot) == opt.start as usize
                            && p.room == opt.room as usize
                    });
                same_committee && same_place
            })?;
            if dom.blocked[found] > 0 {
                return None;
            }
            self.apply(j, found as u32);
        }
        if self.domains.iter().enumerate().any(|(j, d)| self.assigned[j].is_none() && d.alive == 0) {
            return None;
        }
        let values = if self.n_assigned == self.domains.len() {
            self.exact_values()
        } else {
            self.upper_bounds()
        };
        Some(self.project(&values))
    }
}
