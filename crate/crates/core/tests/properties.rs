mod common;

use common::*;
use flab_core::suite;
use flab_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letter(ngens: usize) -> impl Strategy<Value = Letter> {
    (0..ngens, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

fn word(ngens: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(ngens), 0..max).prop_map(Word::new)
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_normal_form_invariants(a in matrix()) {
        prop_assert_eq!(check_snf(&a), Ok(()));
    }

    #[test]
    fn fox_product_rule(u in word(3, 12), v in word(3, 12)) {
        prop_assert_eq!(check_fox(&u, &v, 3), Ok(()));
    }

    #[test]
    fn free_reduction_is_idempotent_and_inverse_cancels(w in word(3, 20)) {
        let r = free_reduce(&w);
        prop_assert!(r.is_reduced());
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert!(free_reduce(&w.mul(&w.inverse())).is_empty());
        let (core, conj) = cyclic_reduce(&w);
        prop_assert_eq!(free_reduce(&conj.mul(&core).mul(&conj.inverse())), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn delta_survives_relator_moves(seed in any::<u64>(), which in 0usize..8) {
        let p = &suite::suite()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = alexander_polynomial(p).unwrap().delta;
        let mut moved = p.clone();
        for _ in 0..3 {
            moved = random_relator_move(&mut rng, &moved);
        }
        prop_assert!(delta_in_basis_of(p, &moved).associate(&before));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn brown_is_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(check_brown_invariance(&random_relator(&mut rng)), Ok(()));
    }

    #[test]
    fn folding_agrees_with_products(gens in prop::collection::vec(word(2, 5), 1..=2), probe in word(2, 5)) {
        let probe = free_reduce(&probe);
        prop_assume!(probe.len() <= 4);
        prop_assert_eq!(check_membership(&gens, &[probe], 4), Ok(()));
    }

    #[test]
    fn every_generator_is_a_member(gens in prop::collection::vec(word(3, 8), 1..=4)) {
        let g = build_folded_graph(&gens, 3);
        for w in &gens {
            prop_assert!(graph_membership(&g, w));
            prop_assert!(graph_membership(&g, &w.inverse()));
        }
        prop_assert!(g.is_folded());
    }
}

#[test]
fn delta_is_symmetric_on_three_manifolds() {
    for p in suite::suite().iter().filter(|p| p.flags.three_manifold) {
        let d = alexander_polynomial(p).unwrap().delta;
        assert!(d.associate(&d.invert_variables()), "{}", p.name);
        assert!(d.predicates().is_symmetric_under_inversion, "{}", p.name);
    }
}

#[test]
fn folding_matches_brute_force_on_all_small_subgroups() {
    let tests = reduced_words(4);
    for gens in rank_two_subgroups() {
        assert_eq!(check_membership(&gens, &tests, 4), Ok(()));
    }
}
