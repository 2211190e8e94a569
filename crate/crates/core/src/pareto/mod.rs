//! Dominance, non-dominated sorting, crowding distance, hypervolume and
//! non-dominated archives. Everything here assumes maximisation.

mod hypervolume;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

pub use hypervolume::{hypervolume, normalize, HypervolumeResult};

use crate::model::ObjectiveVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("objective vectors of different lengths ({left} vs {right})")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// `a` dominates `b`: at least as good everywhere and strictly better somewhere.
///
/// Panics on a length mismatch; see [`try_dominates`].
#[inline]
pub fn dominates<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    assert_eq!(a.len(), b.len(), "dominance between vectors of different lengths");
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

pub fn try_dominates<T: PartialOrd>(a: &[T], b: &[T]) -> Result<bool, LengthMismatch> {
    if a.len() != b.len() {
        return Err(LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(dominates(a, b))
}

/// `a >= b` componentwise.
#[inline]
pub fn weakly_dominates<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Front index of every point (0 = non-dominated), by fast non-dominated sorting.
pub fn sort_fronts<V: AsRef<[i64]>>(points: &[V]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominating: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            let (pa, pb) = (points[a].as_ref(), points[b].as_ref());
            if dominates(pa, pb) {
                dominating[a].push(b);
                dominated_by[b] += 1;
            } else if dominates(pb, pa) {
                dominating[b].push(a);
                dominated_by[a] += 1;
            }
        }
    }
    let mut ranks = vec![usize::MAX; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            ranks[i] = rank;
            for &k in &dominating[i] {
                dominated_by[k] -= 1;
                if dominated_by[k] == 0 {
                    next.push(k);
                }
            }
        }
        next.sort_unstable();
        current = next;
        rank += 1;
    }
    ranks
}

/// Groups indices by front, each front in ascending index order.
pub fn fronts_from_ranks(ranks: &[usize]) -> Vec<Vec<usize>> {
    let count = ranks.iter().copied().max().map_or(0, |m| m + 1);
    let mut fronts = vec![Vec::new(); count];
    for (i, &r) in ranks.iter().enumerate() {
        fronts[r].push(i);
    }
    fronts
}

/// Crowding distance of `point` relative to `others` (which must not contain
/// `point` itself). For every objective with a nonzero range over
/// `others ∪ {point}`, the closest value at least as good and the closest
/// value at most as good are differenced and divided by the range. A point
/// without a strictly better or strictly worse neighbour in such an
/// objective is a boundary point and gets `f64::INFINITY`, as does any point
/// compared against an empty set.
pub fn crowding_against<'a, I>(point: &[i64], others: I) -> f64
where
    I: IntoIterator<Item = &'a [i64]>,
    I::IntoIter: Clone,
{
    let others = others.into_iter();
    if others.clone().next().is_none() {
        return f64::INFINITY;
    }
    let mut total = 0.0;
    for (m, &v) in point.iter().enumerate() {
        let (mut lo, mut hi) = (v, v);
        let mut up: Option<i64> = None;
        let mut down: Option<i64> = None;
        let (mut better, mut worse) = (false, false);
        for o in others.clone() {
            let w = o[m];
            lo = lo.min(w);
            hi = hi.max(w);
            if w >= v {
                up = Some(up.map_or(w, |u| u.min(w)));
            }
            if w <= v {
                down = Some(down.map_or(w, |d| d.max(w)));
            }
            better |= w > v;
            worse |= w < v;
        }
        if hi == lo {
            continue;
        }
        if !better || !worse {
            return f64::INFINITY;
        }
        let (up, down) = (up.unwrap_or(hi), down.unwrap_or(lo));
        total += (up - down) as f64 / (hi - lo) as f64;
    }
    total
}

/// Crowding distance of `set[index]` within `set`.
pub fn crowding_distance<V: AsRef<[i64]>>(index: usize, set: &[V]) -> f64 {
    let others: Vec<&[i64]> =
        set.iter().enumerate().filter(|(k, _)| *k != index).map(|(_, p)| p.as_ref()).collect();
    crowding_against(set[index].as_ref(), others.iter().copied())
}

/// One solution in an archive: its objectives and an opaque payload id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArchiveEntry {
    pub objectives: ObjectiveVector,
    pub payload: u64,
}

/// A set of solutions with their front ranks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrontArchive {
    entries: Vec<ArchiveEntry>,
    ranks: Vec<usize>,
}

impl FrontArchive {
    pub fn new(entries: Vec<ArchiveEntry>) -> Self {
        let ranks = sort_fronts(&entries.iter().map(|e| e.objectives.clone()).collect::<Vec<_>>());
        FrontArchive { entries, ranks }
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose front index is below `fronts`.
    pub fn first_fronts(&self, fronts: usize) -> impl Iterator<Item = &ArchiveEntry> {
        self.entries.iter().zip(&self.ranks).filter(move |(_, r)| **r < fronts).map(|(e, _)| e)
    }

    /// Rank-0 entries with duplicate objective vectors collapsed onto the
    /// lowest payload id, sorted by objective vector.
    pub fn nondominated(&self) -> FrontArchive {
        let mut best: BTreeMap<&ObjectiveVector, u64> = BTreeMap::new();
        for (e, _) in self.entries.iter().zip(&self.ranks).filter(|(_, r)| **r == 0) {
            best.entry(&e.objectives)
                .and_modify(|p| *p = (*p).min(e.payload))
                .or_insert(e.payload);
        }
        let entries: Vec<ArchiveEntry> = best
            .into_iter()
            .map(|(o, p)| ArchiveEntry { objectives: o.clone(), payload: p })
            .collect();
        let ranks = vec![0; entries.len()];
        FrontArchive { entries, ranks }
    }

    pub fn objective_vectors(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.entries.iter().map(|e| &e.objectives)
    }
}

/// Non-dominated union of several archives (associative and commutative).
pub fn merge_nondominated<'a, I>(archives: I) -> FrontArchive
where
    I: IntoIterator<Item = &'a FrontArchive>,
{
    let mut entries = Vec::new();
    for a in archives {
        entries.extend(a.entries.iter().cloned());
    }
    FrontArchive::new(entries).nondominated()
}
