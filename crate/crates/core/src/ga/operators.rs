use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::GaError;
use crate::model::{CommitteeConfig, Instance, SlotMask};

const GREEDY_RESTARTS: usize = 100;

/// Samples a feasible committee for `defence`: roles in random order, each
/// filled uniformly among eligible members that keep a common window. After
/// [`GREEDY_RESTARTS`] dead ends, falls back to a randomised exhaustive search.
pub fn generate_feasible_committee<R: Rng + ?Sized>(
    instance: &Instance,
    defence: usize,
    rng: &mut R,
) -> Result<Vec<usize>, GaError> {
    let roles = instance.n_roles();
    let cal = instance.calendar();
    let mut order: Vec<usize> = (0..roles).collect();
    let mut candidates = Vec::new();
    'restart: for _ in 0..GREEDY_RESTARTS {
        order.shuffle(rng);
        let mut committee = alloc::vec![usize::MAX; roles];
        let mut common = SlotMask::full(cal.total_slots());
        for &t in &order {
            candidates.clear();
            for &i in instance.eligible(defence, t) {
                if committee.contains(&i) {
                    continue;
                }
                let mut next = common.clone();
                next.intersect_with(instance.availability(i));
                if cal.has_window(&next) {
                    candidates.push(i);
                }
            }
            let Some(&i) = candidates.choose(rng) else { continue 'restart };
            committee[t] = i;
            common.intersect_with(instance.availability(i));
        }
        return Ok(committee);
    }
    let mut committee = alloc::vec![usize::MAX; roles];
    let full = SlotMask::full(cal.total_slots());
    if exhaustive(instance, defence, 0, &mut committee, &full, rng) {
        Ok(committee)
    } else {
        Err(GaError::Unsatisfiable { defence })
    }
}

fn exhaustive<R: Rng + ?Sized>(
    instance: &Instance,
    defence: usize,
    role: usize,
    committee: &mut Vec<usize>,
    common: &SlotMask,
    rng: &mut R,
) -> bool {
    if role == instance.n_roles() {
        return true;
    }
    let mut pool: Vec<usize> = instance.eligible(defence, role).to_vec();
    pool.shuffle(rng);
    for i in pool {
        if committee[..role].contains(&i) {
            continue;
        }
        let mut next = common.clone();
        next.intersect_with(instance.availability(i));
        if !instance.calendar().has_window(&next) {
            continue;
        }
        committee[role] = i;
        if exhaustive(instance, defence, role + 1, committee, &next, rng) {
            return true;
        }
    }
    false
}

/// A configuration built defence by defence.
pub fn random_config<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<CommitteeConfig, GaError> {
    let mut genes = Vec::with_capacity(instance.n_defences() * instance.n_roles());
    for j in 0..instance.n_defences() {
        genes.extend(generate_feasible_committee(instance, j, rng)?);
    }
    Ok(CommitteeConfig::from_flat(instance.n_roles(), genes))
}

/// Per defence, copies the whole committee block of `p1` with probability
/// `v`, otherwise that of `p2`.
pub fn non_uniform_crossover<R: Rng + ?Sized>(
    p1: &CommitteeConfig,
    p2: &CommitteeConfig,
    v: f64,
    rng: &mut R,
) -> CommitteeConfig {
    assert!((0.0..=1.0).contains(&v), "crossover probability {v} outside [0, 1]");
    let mut child = p2.clone();
    for j in 0..p1.n_defences() {
        if rng.gen_bool(v) {
            child.set_committee(j, p1.committee(j));
        }
    }
    child
}

/// Uniform committee-block crossover.
pub fn crossover<R: Rng + ?Sized>(p1: &CommitteeConfig, p2: &CommitteeConfig, rng: &mut R) -> CommitteeConfig {
    non_uniform_crossover(p1, p2, 0.5, rng)
}

/// With probability `percent`%, regenerates the committee of one uniformly
/// chosen defence.
pub fn mutate<R: Rng + ?Sized>(
    config: &mut CommitteeConfig,
    percent: u32,
    instance: &Instance,
    rng: &mut R,
) -> Result<bool, GaError> {
    if rng.gen_range(0..100u32) >= percent {
        return Ok(false);
    }
    let j = rng.gen_range(0..config.n_defences());
    let committee = generate_feasible_committee(instance, j, rng)?;
    config.set_committee(j, &committee);
    Ok(true)
}

/// `seeds ∪ { non_uniform_crossover(s_i, s_j, v) : i < j, v ∈ V, h = 1..n_h }`.
pub fn adapted_initialisation<R: Rng + ?Sized>(
    seeds: &[CommitteeConfig],
    probabilities: &[f64],
    repetitions: usize,
    rng: &mut R,
) -> Vec<CommitteeConfig> {
    let mut out = seeds.to_vec();
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            for &v in probabilities {
                for _ in 0..repetitions {
                    out.push(non_uniform_crossover(&seeds[i], &seeds[j], v, rng));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t1;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn t1_committees_are_feasible() {
        let inst = t1();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let c = generate_feasible_committee(&inst, 0, &mut rng).unwrap();
            assert!(CommitteeConfig::committee_is_feasible(&inst, 0, &c));
        }
    }

    #[test]
    fn crossover_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = CommitteeConfig::from_committees(&[vec![0, 2], vec![1, 3]]);
        let b = CommitteeConfig::from_committees(&[vec![0, 3], vec![1, 2]]);
        assert_eq!(non_uniform_crossover(&a, &b, 1.0, &mut rng), a);
        assert_eq!(non_uniform_crossover(&a, &b, 0.0, &mut rng), b);
        assert_eq!(crossover(&a, &a, &mut rng), a);
    }

    #[test]
    fn adapted_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = |k| CommitteeConfig::from_flat(1, vec![k]);
        assert_eq!(adapted_initialisation(&[s(0), s(1)], &[0.5], 1, &mut rng).len(), 3);
        let four = [s(0), s(1), s(2), s(3)];
        assert_eq!(adapted_initialisation(&four, &[0.25, 0.5, 0.75], 2, &mut rng).len(), 40);
    }
}
