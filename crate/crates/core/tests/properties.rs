use proptest::prelude::*;

use simsynth::oracle::{
    bounded_controllable_condition, bounded_observable_condition,
    bounded_strong_observable_condition, brute_force_greatest_simulation,
    brute_force_string_counts, default_bound, literal_controllable_condition,
    literal_observable_condition, literal_strong_observable_condition, random_instance,
    RandomInstanceSpec, StrongObservableWitness,
};
use simsynth::simulation::{f_s_step, greatest_simulation, is_bisimilar, SimMode};
use simsynth::structure::self_product_pairs;
use simsynth::{Automaton, StatePairSet};

fn instance(seed: u64, max: usize, substructure: bool) -> (Automaton, Automaton) {
    random_instance(&RandomInstanceSpec {
        spec_states: (1, max),
        plant_states: (1, max),
        events: 1 + (seed % 3) as usize,
        substructure,
        seed,
        ..Default::default()
    })
}

fn pair_set(r: &Automaton, g: &Automaton, bits: u64) -> StatePairSet {
    StatePairSet::empty(r, g).from_mask(bits & ((1u64 << (r.num_states() * g.num_states())) - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn accessible_is_idempotent(seed in any::<u64>()) {
        let (r, _) = instance(seed, 5, false);
        let once = r.accessible();
        prop_assert_eq!(once.accessible(), once.clone());
        prop_assert_eq!(once.bounded_language(4), r.bounded_language(4));
    }

    #[test]
    fn restrict_depends_only_on_spec_projection(seed in any::<u64>(), bits in any::<u64>(), pick in any::<u64>()) {
        let (r, g) = instance(seed, 4, false);
        let z = pair_set(&r, &g, bits);
        // same rows, one plant state per row
        let rows = z.spec_projection();
        let other = StatePairSet::from_pairs(
            &r,
            &g,
            r.state_ids().filter(|&q| rows[q]).map(|q| (q, (pick as usize + q) % g.num_states())),
        );
        prop_assert_eq!(r.restrict(&z).unwrap(), r.restrict(&other).unwrap());
    }

    #[test]
    fn nondet_sets_are_symmetric_and_reflexive(seed in any::<u64>()) {
        let (_, g) = instance(seed, 5, false);
        let pairs = self_product_pairs(&g);
        let n = g.num_states();
        let reach = g.reachable_mask();
        for x in g.state_ids().filter(|&x| reach[x]) {
            let set = g.nondet_state_set(x).unwrap();
            prop_assert!(set.contains(&x));
            for &y in &set {
                prop_assert!(pairs[x * n + y] && pairs[y * n + x]);
                prop_assert!(g.nondet_state_set(y).unwrap().contains(&x));
            }
        }
    }

    #[test]
    fn string_counts_match_enumeration(seed in any::<u64>()) {
        let (r, _) = instance(seed, 5, false);
        let fast = r.string_count_class();
        let slow = brute_force_string_counts(&r);
        for q in r.state_ids() {
            prop_assert_eq!(fast.tag(q), slow[q], "state {}", r.state_name(q));
        }
    }

    #[test]
    fn bounded_language_is_prefix_closed_and_monotone(seed in any::<u64>(), k in 0usize..5) {
        let (r, _) = instance(seed, 4, false);
        let small = r.bounded_language(k);
        let big = r.bounded_language(k + 1);
        for s in &small {
            prop_assert!(big.contains(s));
            if let Some((_, prefix)) = s.split_last() {
                prop_assert!(small.iter().any(|t| t.as_slice() == prefix));
            }
        }
    }

    #[test]
    fn f_s_shrinks_and_full_mode_is_monotone(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let (r, g) = instance(seed, 4, false);
        let big = pair_set(&r, &g, a | b);
        let small = pair_set(&r, &g, a);
        for mode in [SimMode::Full, SimMode::Restricted] {
            prop_assert!(f_s_step(&r, &g, &big, mode).unwrap().is_subset(&big));
        }
        let fs_small = f_s_step(&r, &g, &small, SimMode::Full).unwrap();
        let fs_big = f_s_step(&r, &g, &big, SimMode::Full).unwrap();
        prop_assert!(fs_small.is_subset(&fs_big));
    }

    #[test]
    fn greatest_simulation_matches_enumeration(seed in any::<u64>()) {
        let (r, g) = instance(seed, 3, seed % 2 == 0);
        prop_assume!(r.num_states() * g.num_states() <= 12);
        let fast = greatest_simulation(&r, &g).unwrap().map(|s| s.pairs);
        let slow = brute_force_greatest_simulation(&r, &g).unwrap();
        match fast {
            Some(p) => prop_assert_eq!(p, slow),
            None => {
                let (q0, x0) = (r.initial().unwrap(), g.initial().unwrap());
                prop_assert!(!slow.contains(q0, x0));
            }
        }
    }

    #[test]
    fn substructure_specs_are_simulated(seed in any::<u64>()) {
        let (r, g) = instance(seed, 5, true);
        prop_assert!(greatest_simulation(&r, &g).unwrap().is_some());
    }

    #[test]
    fn bisimilar_automata_share_bounded_languages(seed in any::<u64>(), other in any::<u64>()) {
        let (a, _) = instance(seed, 4, false);
        let (b, _) = instance(other, 4, false);
        prop_assert!(is_bisimilar(&a, &a.accessible()).unwrap());
        if a.alphabet() == b.alphabet() && is_bisimilar(&a, &b).unwrap() {
            prop_assert_eq!(a.bounded_language(6), b.bounded_language(6));
        }
    }

    #[test]
    fn configuration_search_matches_string_enumeration(seed in any::<u64>(), k in 0usize..5) {
        let (r, g) = instance(seed, 3, seed % 3 == 0);
        prop_assert_eq!(
            bounded_controllable_condition(&r, &g, k).unwrap().is_none(),
            literal_controllable_condition(&r, &g, k)
        );
        prop_assert_eq!(
            bounded_strong_observable_condition(&r, &g, k).unwrap().is_none(),
            literal_strong_observable_condition(&r, &g, k)
        );
        prop_assert_eq!(
            bounded_observable_condition(&r, &g, k).unwrap().is_none(),
            literal_observable_condition(&r, &g, k)
        );
    }

    #[test]
    fn default_bound_is_sufficient(seed in any::<u64>()) {
        let (r, g) = instance(seed, 4, seed % 2 == 0);
        let k = default_bound(&r, &g);
        prop_assert_eq!(
            bounded_controllable_condition(&r, &g, k).unwrap().is_none(),
            bounded_controllable_condition(&r, &g, k + 2).unwrap().is_none()
        );
        prop_assert_eq!(
            bounded_strong_observable_condition(&r, &g, k).unwrap().is_none(),
            bounded_strong_observable_condition(&r, &g, k + 2).unwrap().is_none()
        );
        prop_assert_eq!(
            bounded_observable_condition(&r, &g, k).unwrap().is_none(),
            bounded_observable_condition(&r, &g, k + 2).unwrap().is_none()
        );
    }

    #[test]
    fn witnesses_replay(seed in any::<u64>()) {
        let (r, g) = instance(seed, 4, false);
        let k = 6;
        let sigma = r.alphabet();
        if let Some(w) = bounded_controllable_condition(&r, &g, k).unwrap() {
            prop_assert!(r.step_from_initial(&w.string).contains(&w.state));
            prop_assert!(!sigma.is_controllable(w.event));
            prop_assert!(!r.has_event(w.state, w.event));
            let mut ext = w.string.clone();
            ext.push(w.event);
            prop_assert!(g.accepts_prefix(&ext));
        }
        match bounded_strong_observable_condition(&r, &g, k).unwrap() {
            Some(StrongObservableWitness::Hidden(s)) => {
                prop_assert!(sigma.project(&s).is_empty());
                prop_assert!(g.accepts_prefix(&s));
                prop_assert!(!r.accepts_prefix(&s));
            }
            Some(StrongObservableWitness::Pair { s1, s2, state, event }) => {
                prop_assert!(!s1.is_empty());
                prop_assert_eq!(sigma.project(&s1), sigma.project(&s2));
                prop_assert!(r.accepts_prefix(&s1));
                prop_assert!(r.step_from_initial(&s2).contains(&state));
                prop_assert!(!r.has_event(state, event));
                for s in [&s1, &s2] {
                    let mut ext = s.clone();
                    ext.push(event);
                    prop_assert!(g.accepts_prefix(&ext));
                }
            }
            None => {}
        }
    }
}
