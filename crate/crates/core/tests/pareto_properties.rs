mod common;

use common::{naive_crowding, pairwise_ranks};
use defsched_core::model::ObjectiveVector;
use defsched_core::pareto::{
    crowding_distance, dominates, hypervolume, merge_nondominated, sort_fronts, ArchiveEntry, FrontArchive,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn points(dims: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..5, dims), 0..max_len)
}

/// Inclusion–exclusion over all nonempty subsets.
fn inclusion_exclusion(front: &[Vec<f64>], reference: &[f64]) -> f64 {
    let n = front.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut corner: Vec<f64> = vec![f64::INFINITY; reference.len()];
        for (i, p) in front.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for d in 0..reference.len() {
                    corner[d] = corner[d].min(p[d]);
                }
            }
        }
        let vol: f64 = corner.iter().zip(reference).map(|(c, r)| (c - r).max(0.0)).product();
        total += if mask.count_ones() % 2 == 1 { vol } else { -vol };
    }
    total
}

proptest! {
    #[test]
    fn dominance_is_a_strict_order(a in prop::collection::vec(-3i64..3, 3),
                                    b in prop::collection::vec(-3i64..3, 3),
                                    c in prop::collection::vec(-3i64..3, 3)) {
        prop_assert!(!dominates(&a, &a));
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
    }

    #[test]
    fn sort_matches_pairwise_oracle(pts in points(3, 20)) {
        prop_assert_eq!(sort_fronts(&pts), pairwise_ranks(&pts));
    }

    #[test]
    fn sort_is_permutation_invariant(pts in points(3, 15), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let shuffled: Vec<Vec<i64>> = order.iter().map(|&i| pts[i].clone()).collect();
        let ranks = sort_fronts(&pts);
        let shuffled_ranks = sort_fronts(&shuffled);
        for (k, &i) in order.iter().enumerate() {
            prop_assert_eq!(shuffled_ranks[k], ranks[i]);
        }
    }

    #[test]
    fn ranks_are_consistent(pts in points(2, 15)) {
        let ranks = sort_fronts(&pts);
        for (i, p) in pts.iter().enumerate() {
            for (k, q) in pts.iter().enumerate() {
                if dominates(p, q) {
                    prop_assert!(ranks[i] < ranks[k]);
                }
            }
            if ranks[i] > 0 {
                prop_assert!(pts.iter().enumerate().any(|(k, q)| ranks[k] == ranks[i] - 1 && dominates(q, p)));
            }
        }
    }

    #[test]
    fn crowding_matches_naive_scan(pts in points(3, 8).prop_filter("two or more", |p| p.len() >= 2)) {
        for s in 0..pts.len() {
            let got = crowding_distance(s, &pts);
            let want = naive_crowding(s, &pts);
            prop_assert!(got == want || (got - want).abs() < 1e-12, "s={} got={} want={}", s, got, want);
        }
    }

    #[test]
    fn hypervolume_matches_inclusion_exclusion(front in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..6)) {
        let reference = [0.0; 3];
        let got = hypervolume(&front, &reference).value;
        prop_assert!((got - inclusion_exclusion(&front, &reference)).abs() < 1e-9);
    }

    #[test]
    fn hypervolume_is_monotone(front in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 0..6),
                               extra in prop::collection::vec(0.0f64..1.0, 3)) {
        let reference = [0.0; 3];
        let before = hypervolume(&front, &reference).value;
        let mut more = front.clone();
        more.push(extra);
        prop_assert!(hypervolume(&more, &reference).value >= before - 1e-12);
    }

    #[test]
    fn merge_is_rank_zero_of_union(a in points(2, 10), b in points(2, 10)) {
        let archive = |pts: &[Vec<i64>], base: u64| FrontArchive::new(
            pts.iter().enumerate()
                .map(|(k, p)| ArchiveEntry { objectives: ObjectiveVector(p.clone()), payload: base + k as u64 })
                .collect());
        let (x, y) = (archive(&a, 0), archive(&b, 100));
        let merged = merge_nondominated([&x, &y]);
        prop_assert_eq!(&merged, &merge_nondominated([&y, &x]));

        let union: Vec<(Vec<i64>, u64)> = a.iter().cloned().zip(0u64..)
            .chain(b.iter().cloned().zip(100u64..)).collect();
        let mut want: Vec<(Vec<i64>, u64)> = Vec::new();
        for (p, id) in &union {
            if union.iter().any(|(q, _)| dominates(q, p)) {
                continue;
            }
            match want.iter_mut().find(|(q, _)| q == p) {
                Some(entry) => entry.1 = entry.1.min(*id),
                None => want.push((p.clone(), *id)),
            }
        }
        want.sort();
        let got: Vec<(Vec<i64>, u64)> =
            merged.entries().iter().map(|e| (e.objectives.0.clone(), e.payload)).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn two_objective_fixtures_match_inclusion_exclusion() {
    // dyadic coordinates keep every partial sum exact in f64
    let fixtures: Vec<Vec<Vec<f64>>> = vec![
        vec![],
        vec![vec![1.0, 1.0]],
        vec![vec![1.0, 0.5], vec![0.5, 1.0]],
        vec![vec![0.25, 0.875], vec![0.625, 0.5], vec![0.875, 0.125]],
        vec![vec![0.5, 0.5], vec![0.5, 0.5], vec![0.25, 0.75]],
        vec![vec![0.375, 0.375], vec![0.625, 0.625], vec![0.125, 0.875]],
    ];
    let reference = [0.0, 0.0];
    for front in &fixtures {
        assert_eq!(hypervolume(front, &reference).value, inclusion_exclusion(front, &reference), "{front:?}");
    }
    assert_eq!(hypervolume(&fixtures[2], &reference).value, 0.75);
}

#[test]
fn three_objective_fronts_match_monte_carlo() {
    const SAMPLES: usize = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let reference = [0.0; 3];
    for _ in 0..3 {
        let front: Vec<Vec<f64>> = (0..5).map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
        let exact = hypervolume(&front, &reference).value;
        let mut hits = 0usize;
        for _ in 0..SAMPLES {
            let x: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            if front.iter().any(|p| p.iter().zip(&x).all(|(a, b)| b <= a)) {
                hits += 1;
            }
        }
        let p = hits as f64 / SAMPLES as f64;
        let sigma = (p * (1.0 - p) / SAMPLES as f64).sqrt();
        assert!((exact - p).abs() <= 3.0 * sigma, "exact {exact} vs estimate {p} (σ {sigma})");
    }
}
