use proptest::prelude::*;

use strline::automata::{compile, determinize, minimize, product, remove_epsilon, shortest_witness};
use strline::gen::{random_nfa, random_regex, rng};
use strline::regex::{alt, Regex};
use strline::{Alphabet, Nfa};

fn bin() -> Alphabet {
    Alphabet::from_str_symbols("01")
}

fn regex() -> impl Strategy<Value = Regex> {
    (any::<u64>(), 1usize..=8, 0u8..5).prop_map(|(seed, size, k)| {
        let r = random_regex(&mut rng(seed), &bin(), size);
        match k {
            0 => alt(r, Regex::Epsilon),
            1 => alt(r, Regex::Empty),
            _ => r,
        }
    })
}

fn nfa() -> impl Strategy<Value = Nfa> {
    (any::<u64>(), 1usize..=4).prop_map(|(seed, n)| random_nfa(&mut rng(seed), &bin(), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compiled_automaton_matches_the_recursive_matcher(e in regex()) {
        let a = compile(&e, &bin());
        for w in bin().words_up_to(6) {
            prop_assert_eq!(a.accepts(&w), e.matches(&w), "{} on {:?}", e, w);
        }
    }

    #[test]
    fn epsilon_removal_preserves_the_language(e in regex()) {
        let a = compile(&e, &bin());
        let b = remove_epsilon(&a);
        prop_assert!(b.is_epsilon_free());
        for w in bin().words_up_to(6) {
            prop_assert_eq!(a.accepts(&w), b.accepts(&w));
        }
    }

    #[test]
    fn determinization_and_minimization_preserve_the_language(e in regex()) {
        let a = compile(&e, &bin());
        let d = determinize(&a, &bin());
        let m = minimize(&a, &bin());
        prop_assert!(m.num_states() <= d.num_states().max(1));
        for w in bin().words_up_to(6) {
            prop_assert_eq!(d.accepts(&w), a.accepts(&w));
            prop_assert_eq!(m.accepts(&w), a.accepts(&w));
            prop_assert!(m.count_accepting_runs(&w) <= 1);
        }
    }

    #[test]
    fn minimal_automata_are_canonical(e in regex()) {
        // The same language presented twice gives the same automaton.
        let a = minimize(&compile(&e, &bin()), &bin());
        let b = minimize(&compile(&alt(e.clone(), e.clone()), &bin()), &bin());
        prop_assert_eq!(a.num_states(), b.num_states());
        prop_assert_eq!(a.finals, b.finals);
        prop_assert_eq!(a.graph.edges().collect::<Vec<_>>(), b.graph.edges().collect::<Vec<_>>());
    }

    #[test]
    fn product_is_intersection(a in nfa(), b in nfa()) {
        let p = product(&a, &b);
        for w in bin().words_up_to(6) {
            prop_assert_eq!(p.accepts(&w), a.accepts(&w) && b.accepts(&w));
        }
    }

    #[test]
    fn shortest_witness_is_minimal_and_replays(autos in proptest::collection::vec(nfa(), 1..=3)) {
        let common: Vec<_> = bin().words_up_to(6).into_iter().filter(|w| autos.iter().all(|a| a.accepts(w))).collect();
        match shortest_witness(&autos, &bin()) {
            Some(wit) => {
                prop_assert!(wit.replays(&autos));
                if let Some(first) = common.first() {
                    // words_up_to lists words in length-lexicographic order.
                    prop_assert_eq!(&wit.word, first);
                } else {
                    prop_assert!(wit.word.len() > 6);
                }
            }
            None => prop_assert!(common.is_empty()),
        }
    }
}

#[test]
fn empty_language_has_no_witness() {
    let e = compile(&Regex::Empty, &bin());
    assert!(shortest_witness(std::slice::from_ref(&e), &bin()).is_none());
    let m = minimize(&e, &bin());
    assert!(m.finals.is_empty());
}
