use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::GaError;
use crate::pareto::{crowding_against, fronts_from_ranks};

fn crowding_in<V: AsRef<[i64]>>(points: &[V], s: usize, reference: &[usize]) -> f64 {
    crowding_against(
        points[s].as_ref(),
        reference.iter().filter(|&&k| k != s).map(|&k| points[k].as_ref()),
    )
}

/// Lower rank wins; on equal ranks the strictly larger crowding distance
/// against `reference` wins; otherwise `s1`.
pub fn crowding_match<V: AsRef<[i64]>>(
    s1: usize,
    s2: usize,
    points: &[V],
    ranks: &[usize],
    reference: &[usize],
) -> usize {
    if ranks[s2] < ranks[s1] {
        return s2;
    }
    if ranks[s1] < ranks[s2] {
        return s1;
    }
    if crowding_in(points, s2, reference) > crowding_in(points, s1, reference) {
        s2
    } else {
        s1
    }
}

/// `rounds` passes of shuffled pairwise matches. Winners accumulate as a
/// set in first-win order; crowding is measured against the winners so far,
/// or against the whole population while there are none.
pub fn tournament<V: AsRef<[i64]>, R: Rng + ?Sized>(
    points: &[V],
    ranks: &[usize],
    rounds: usize,
    rng: &mut R,
) -> Vec<usize> {
    let all: Vec<usize> = (0..points.len()).collect();
    let mut winners: Vec<usize> = Vec::new();
    let mut is_winner = vec![false; points.len()];
    for _ in 0..rounds {
        let mut order = all.clone();
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            let reference = if winners.is_empty() { &all } else { &winners };
            let w = crowding_match(pair[0], pair[1], points, ranks, reference);
            if !is_winner[w] {
                is_winner[w] = true;
                winners.push(w);
            }
        }
    }
    winners
}

/// Whole fronts in rank order while they fit in `capacity`; returns the
/// chosen indices and the first front that did not fit (empty if none).
fn fill_fronts(ranks: &[usize], capacity: usize) -> (Vec<usize>, Vec<usize>) {
    let mut elite = Vec::with_capacity(capacity);
    for front in fronts_from_ranks(ranks) {
        if elite.len() + front.len() <= capacity {
            elite.extend(front);
        } else {
            return (elite, front);
        }
    }
    (elite, Vec::new())
}

/// NSGA-II elitism: `population_size / 2` indices.
pub fn elite2<V: AsRef<[i64]>>(points: &[V], ranks: &[usize], population_size: usize) -> Vec<usize> {
    let capacity = (population_size / 2).min(points.len());
    let (mut elite, mut rest) = fill_fronts(ranks, capacity);
    while elite.len() < capacity {
        let mut best = 0;
        let mut best_cd = f64::NEG_INFINITY;
        for (k, &c) in rest.iter().enumerate() {
            let cd = crowding_against(points[c].as_ref(), elite.iter().map(|&e| points[e].as_ref()));
            if cd > best_cd {
                best = k;
                best_cd = cd;
            }
        }
        elite.push(rest.remove(best));
    }
    elite
}

/// NSGA-III elitism: fronts, then reference-point niching on the first front
/// that does not fit. Objectives of `elite ∪ front` are min-max normalised
/// (zero range maps to 0), each point joins its nearest reference point
/// (ties to the lowest index), and seats go to uniformly random candidates
/// of the least-frequent reference point. Points without candidates are
/// dropped from consideration.
pub fn elite3<V: AsRef<[i64]>, R: Rng + ?Sized>(
    points: &[V],
    ranks: &[usize],
    population_size: usize,
    reference_points: &[Vec<f64>],
    rng: &mut R,
) -> Result<Vec<usize>, GaError> {
    if reference_points.is_empty() {
        return Err(GaError::InvalidParams("empty reference point set".into()));
    }
    let capacity = (population_size / 2).min(points.len());
    let (mut elite, front) = fill_fronts(ranks, capacity);
    if elite.len() == capacity {
        return Ok(elite);
    }
    let dims = points[front[0]].as_ref().len();
    if reference_points.iter().any(|r| r.len() != dims) {
        return Err(GaError::InvalidParams("reference point dimension differs from objectives".into()));
    }
    let members: Vec<usize> = elite.iter().chain(&front).copied().collect();
    let mut lo = vec![i64::MAX; dims];
    let mut hi = vec![i64::MIN; dims];
    for &m in &members {
        for (d, &z) in points[m].as_ref().iter().enumerate() {
            lo[d] = lo[d].min(z);
            hi[d] = hi[d].max(z);
        }
    }
    let nearest = |m: usize| -> usize {
        let p = points[m].as_ref();
        let normalised: Vec<f64> = (0..dims)
            .map(|d| if hi[d] > lo[d] { (p[d] - lo[d]) as f64 / (hi[d] - lo[d]) as f64 } else { 0.0 })
            .collect();
        nearest_reference(&normalised, reference_points)
    };
    let mut frequency = vec![0usize; reference_points.len()];
    for &e in &elite {
        frequency[nearest(e)] += 1;
    }
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); reference_points.len()];
    for &f in &front {
        candidates[nearest(f)].push(f);
    }
    let mut excluded = vec![false; reference_points.len()];
    while elite.len() < capacity {
        let r = (0..reference_points.len())
            .filter(|&r| !excluded[r])
            .min_by_key(|&r| (frequency[r], r))
            .expect("front members are assigned to some reference point");
        if candidates[r].is_empty() {
            excluded[r] = true;
            continue;
        }
        let k = rng.gen_range(0..candidates[r].len());
        elite.push(candidates[r].remove(k));
        frequency[r] += 1;
    }
    Ok(elite)
}

/// Index of the reference point closest to `point` in Euclidean distance,
/// ties to the lowest index.
pub fn nearest_reference(point: &[f64], reference_points: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (r, zr) in reference_points.iter().enumerate() {
        let dist: f64 = point.iter().zip(zr).map(|(a, b)| (a - b) * (a - b)).sum();
        if dist < best_dist {
            best = r;
            best_dist = dist;
        }
    }
    best
}

/// Simplex lattice: all points with coordinates in multiples of `1/divisions`
/// summing to one, first coordinate descending.
pub fn default_reference_points(objectives: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, h: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / h as f64).collect());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(left - c, slots - 1, h, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if objectives == 0 || divisions == 0 {
        return out;
    }
    rec(divisions, objectives, divisions, &mut Vec::new(), &mut out);
    out
}
