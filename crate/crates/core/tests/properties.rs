//! Randomised cross-checks between the checkers and their independent
//! oracles, at small sizes. Everything is seeded and deterministic.

mod common;

use bvslab::axiom::{check_bvs, minimal_s, AxiomVerdict, BvsParams, MinimalS};
use bvslab::contraction::{
    check_banach_contractive, check_ciric_max, check_reich, ReichCoefficients,
};
use bvslab::picard::{detect_fixed_points, iterate, OrbitStatus};
use bvslab::scalar::Scalar;
use bvslab::space::{FiniteSpace, Space};
use common::{random_map, random_space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(s: &str) -> Scalar {
    s.parse().unwrap()
}

/// Unreduced oracle: quantify over ordered pairs and all tuples with no
/// pruning and no symmetry reduction.
fn check_bvs_ordered_oracle(space: &FiniteSpace, v: usize, s: &Scalar) -> bool {
    let n = space.len();
    if n < v + 2 {
        return true;
    }
    fn tuples(interior: &[usize], v: usize) -> Vec<Vec<usize>> {
        if v == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, &cand) in interior.iter().enumerate() {
            let mut rest: Vec<usize> = interior.to_vec();
            rest.remove(i);
            for mut tail in tuples(&rest, v - 1) {
                let mut t = vec![cand];
                t.append(&mut tail);
                out.push(t);
            }
        }
        out
    }
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let interior: Vec<usize> = (0..n).filter(|&k| k != x && k != y).collect();
            for tuple in tuples(&interior, v) {
                let mut sum = space.distance_by_position(x, tuple[0]).clone();
                for w in tuple.windows(2) {
                    sum = sum + space.distance_by_position(w[0], w[1]).clone();
                }
                sum = sum + space.distance_by_position(*tuple.last().unwrap(), y).clone();
                if space.distance_by_position(x, y) > &(s * &sum) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn reduced_checker_agrees_with_ordered_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let space = random_space(&mut rng, 5, 6);
        for v in 1..=2u32 {
            for s_txt in ["1", "3/2", "2", "4"] {
                let s = rat(s_txt);
                let reduced = check_bvs(&space, &BvsParams::new(v, s.clone()).unwrap()).passed();
                let oracle = check_bvs_ordered_oracle(&space, v as usize, &s);
                assert_eq!(reduced, oracle, "v={v} s={s} on {space:?}");
            }
        }
    }
}

#[test]
fn pass_iff_s_at_least_minimal_on_random_spaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for round in 0..60 {
        let n = rng.random_range(5..=7);
        let space = random_space(&mut rng, n, 8);
        for v in 1..=2u32 {
            let bound = match minimal_s(&space, v) {
                MinimalS::Bound { s_min, .. } => s_min,
                MinimalS::Vacuous => panic!("not vacuous at n={n}"),
            };
            let probes = [
                (bound.clone(), true),
                (&bound * &rat("2"), true),
                (&bound * &rat("63/64"), bound == rat("1")),
                (&bound * &rat("65/64"), true),
            ];
            for (s, expect) in probes {
                if s < rat("1") {
                    continue;
                }
                let got = check_bvs(&space, &BvsParams::new(v, s.clone()).unwrap()).passed();
                assert_eq!(got, expect, "round {round} v={v} s={s} bound={bound}");
            }
        }
    }
}

#[test]
fn monotone_in_s_and_witnesses_reevaluate() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let space = random_space(&mut rng, 6, 6);
        let s = Scalar::ratio(rng.random_range(1..=3), 1);
        let params = BvsParams::new(1, s.clone()).unwrap();
        match check_bvs(&space, &params) {
            AxiomVerdict::Pass | AxiomVerdict::PassVacuous => {
                let bigger = BvsParams::new(1, &s + &rat("1/2")).unwrap();
                assert!(check_bvs(&space, &bigger).passed(), "monotonicity broke");
            }
            AxiomVerdict::Fail(w) => {
                let mut sum = space.distance(&w.x, &w.chain[0]).unwrap();
                for pair in w.chain.windows(2) {
                    sum = sum + space.distance(&pair[0], &pair[1]).unwrap();
                }
                sum = sum + space.distance(w.chain.last().unwrap(), &w.y).unwrap();
                assert_eq!(sum, w.chain_sum);
                assert!(w.lhs > &s * &sum);
            }
        }
    }
}

#[test]
fn plain_contractivity_implies_the_max_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut implications = 0;
    for _ in 0..300 {
        let space = random_space(&mut rng, 5, 6);
        let map = random_map(&mut rng, &space);
        let banach = check_banach_contractive(&space, space.points(), &map).unwrap();
        if banach.passed() {
            implications += 1;
            let ciric = check_ciric_max(&space, space.points(), &map).unwrap();
            assert!(ciric.passed(), "max condition must follow");
        }
    }
    assert!(implications > 0, "seed produced no contractive maps at all");
}

#[test]
fn pure_a_reich_agrees_with_plain_contractivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let pure_a = ReichCoefficients::new(rat("1"), rat("0"), rat("0")).unwrap();
    for _ in 0..100 {
        let space = random_space(&mut rng, 5, 6);
        let map = random_map(&mut rng, &space);
        let banach = check_banach_contractive(&space, space.points(), &map).unwrap();
        let reich = check_reich(&space, space.points(), &map, &pure_a).unwrap();
        assert_eq!(banach.passed(), reich.passed());
    }
}

// On a finite table the max condition forces Picard absorption: step
// distances strictly decrease through a finite value set, so every orbit
// hits the unique fixed point within (distinct distances + 1) steps.
#[test]
fn finite_spaces_turn_the_max_condition_into_a_picard_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut accepted = 0;
    while accepted < 60 {
        let n = rng.random_range(2..=6);
        let space = random_space(&mut rng, n, 6);
        let map = random_map(&mut rng, &space);
        if !check_ciric_max(&space, space.points(), &map).unwrap().passed() {
            continue;
        }
        accepted += 1;
        let budget = space.distinct_distance_count() + 1;
        for start in space.points() {
            let orbit = iterate(&space, &map, start, budget).unwrap();
            assert!(
                matches!(orbit.status, OrbitStatus::FixedPoint { .. }),
                "orbit from {start} did not absorb within {budget} steps"
            );
        }
        let fixed = detect_fixed_points(&space, space.points(), &map).unwrap();
        assert_eq!(fixed.len(), 1, "uniqueness of the fixed point");
    }
}

#[test]
fn passing_reich_or_max_maps_have_at_most_one_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let even = ReichCoefficients::new(rat("1/3"), rat("1/3"), rat("1/3")).unwrap();
    for _ in 0..200 {
        let space = random_space(&mut rng, 5, 6);
        let map = random_map(&mut rng, &space);
        let reich_ok = check_reich(&space, space.points(), &map, &even).unwrap().passed();
        let ciric_ok = check_ciric_max(&space, space.points(), &map).unwrap().passed();
        if reich_ok || ciric_ok {
            let fixed = detect_fixed_points(&space, space.points(), &map).unwrap();
            assert!(fixed.len() <= 1);
        }
    }
}
