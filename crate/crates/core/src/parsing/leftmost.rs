//! Leftmost-longest parsing automata for regular patterns.
//!
//! The pattern automaton `a0` is first given a fresh initial state `q00`
//! without incoming edges. Sets of pattern states are sorted vectors.
//!
//! Three constructions, by the shape of the pattern language `L`:
//! * `ε ∉ L`: modes searchleft `(ρ, S)` and searchlong `(S1, S)`. `ρ` holds the
//!   threads started at earlier positions (the trailing `{q00}` is implicit),
//!   `S` holds threads that must never reach a final state.
//! * `ε ∈ L ≠ {ε}`: a match starts at every boundary. States are
//!   `Boundary(S)`, `Long(S1, S)` and `Copy(S)`; `Copy` sits right after a
//!   nonempty match, where the next letter is copied unmatched.
//! * `L = {ε}`: one state; every letter is preceded by an empty match and one
//!   more follows the last letter.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Explorer, FinalKind, ParsingAutomaton, ParsingError, StepKind};
use crate::alphabet::{Alphabet, Symbol};
use crate::automata::{Nfa, State, TransitionGraph};

type Set = Vec<State>;

/// Copy of `a0` with a fresh initial state (the last one) carrying the
/// outgoing edges of the old initial state and no incoming edges.
pub fn normalize_initial(a0: &Nfa) -> Nfa {
    let n = a0.num_states();
    let mut g = TransitionGraph::new(n + 1);
    for (p, l, q) in a0.graph.edges() {
        g.add_edge(p, l, q);
        if p == a0.initial {
            g.add_edge(n, l, q);
        }
    }
    for q in 0..n {
        g.set_label(q, a0.graph.label(q));
    }
    g.set_label(n, "q00".to_string());
    g.normalize();
    let mut finals = a0.finals.clone();
    if a0.finals.contains(&a0.initial) {
        finals.insert(n);
    }
    Nfa::new(Arc::new(g), n, finals).expect("states in range")
}

/// Left-to-right reduction: each set loses the states of the sets before it,
/// and sets left empty are dropped.
pub fn red(sets: &[Set]) -> Vec<Set> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in sets {
        let rest: Set = s.iter().copied().filter(|q| !seen.contains(q)).collect();
        if !rest.is_empty() {
            seen.extend(rest.iter().copied());
            out.push(rest);
        }
    }
    out
}

/// The normalized pattern automaton as a successor table.
struct Pattern {
    succ: Vec<Vec<Set>>,
    finals: Vec<bool>,
    q00: State,
    letters: Vec<Symbol>,
    names: Vec<String>,
}

impl Pattern {
    fn new(a0: &Nfa, alphabet: &Alphabet) -> Result<Self, ParsingError> {
        if !a0.is_epsilon_free() {
            return Err(ParsingError::Precondition("pattern automaton must be ε-free"));
        }
        let a = normalize_initial(a0);
        let letters = alphabet.symbols().to_vec();
        let succ = (0..a.num_states())
            .map(|q| {
                letters
                    .iter()
                    .map(|&c| a.graph.step(&[q].into(), c).into_iter().collect())
                    .collect()
            })
            .collect();
        Ok(Pattern {
            succ,
            finals: (0..a.num_states()).map(|q| a.finals.contains(&q)).collect(),
            q00: a.initial,
            letters,
            names: (0..a.num_states()).map(|q| a.graph.label(q)).collect(),
        })
    }

    fn delta(&self, s: &[State], k: usize) -> Set {
        let set: BTreeSet<State> = s.iter().flat_map(|&q| self.succ[q][k].iter().copied()).collect();
        set.into_iter().collect()
    }

    fn hits_final(&self, s: &[State]) -> bool {
        s.iter().any(|&q| self.finals[q])
    }

    fn show(&self, s: &[State]) -> String {
        let items: Vec<&str> = s.iter().map(|&q| self.names[q].as_str()).collect();
        format!("{{{}}}", items.join(","))
    }
}

fn union(a: &[State], b: &[State]) -> Set {
    let s: BTreeSet<State> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

fn subset(a: &[State], b: &[State]) -> bool {
    a.iter().all(|q| b.contains(q))
}

/// Forward exploration shared by the constructions: `next` lists the
/// outgoing `(letter, key, kind)` triples of a key.
fn explore<K, F>(
    init: K,
    limit: usize,
    mut next: F,
    show: impl Fn(&K) -> String,
    active: impl Fn(&K) -> bool,
    finals: impl Fn(&K) -> Option<FinalKind>,
) -> Result<ParsingAutomaton, ParsingError>
where
    K: Clone + Eq + std::hash::Hash,
    F: FnMut(&K) -> Vec<(Symbol, K, StepKind)>,
{
    let mut ex = Explorer::new(limit);
    ex.intern(init)?;
    let mut edges = Vec::new();
    let mut s = 0;
    while s < ex.len() {
        let key = ex.get(s).unwrap();
        let mut out = Vec::new();
        for (a, k, kind) in next(&key) {
            out.push((a, ex.intern(k)?, kind));
        }
        out.sort();
        edges.push(out);
        s += 1;
    }
    let keys: Vec<K> = (0..ex.len()).map(|s| ex.get(s).unwrap()).collect();
    Ok(ParsingAutomaton {
        labels: keys.iter().map(show).collect(),
        initial: 0,
        edges,
        active: keys.iter().map(active).collect(),
        finals: keys.iter().map(finals).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    /// `(ρ, S)`; `ρ` excludes the trailing `{q00}`.
    Left(Vec<Set>, Set),
    Long(Set, Set),
}

/// Parsing automaton for a pattern with `ε ∉ L(a0)`.
pub fn build_regex_automaton(a0: &Nfa, alphabet: &Alphabet, limit: usize) -> Result<ParsingAutomaton, ParsingError> {
    if a0.finals.contains(&a0.initial) {
        return Err(ParsingError::Precondition("pattern must not accept ε"));
    }
    let p = Pattern::new(a0, alphabet)?;
    let q00 = vec![p.q00];
    let next = |key: &Key| {
        // Forbidden threads never sit in a final state, except right after a
        // match ends (empty ρ), where they only block re-entry.
        debug_assert!(match key {
            Key::Left(rho, s) => rho.is_empty() || !p.hits_final(s),
            Key::Long(_, s) => !p.hits_final(s),
        });
        let mut out = Vec::new();
        for (k, &a) in p.letters.iter().enumerate() {
            match key {
                Key::Left(rho, s) => {
                    let ds = p.delta(s, k);
                    if p.hits_final(&ds) {
                        continue;
                    }
                    let drho: Vec<Set> = rho.iter().map(|t| p.delta(t, k)).collect();
                    let older = drho.iter().fold(Vec::new(), |acc, t| union(&acc, t));
                    if p.hits_final(&older) {
                        continue;
                    }
                    let d0 = p.delta(&q00, k);
                    if !p.hits_final(&d0) {
                        let mut threads = drho.clone();
                        threads.push(d0.clone());
                        out.push((a, Key::Left(red(&threads), ds.clone()), StepKind::Plain));
                    }
                    let forbidden = union(&ds, &older);
                    if !subset(&d0, &forbidden) {
                        out.push((a, Key::Long(d0.clone(), forbidden.clone()), StepKind::Enter));
                    }
                    if p.hits_final(&d0) {
                        out.push((a, Key::Left(vec![], union(&forbidden, &d0)), StepKind::Single));
                    }
                }
                Key::Long(s1, s) => {
                    let ds = p.delta(s, k);
                    if p.hits_final(&ds) {
                        continue;
                    }
                    let d1 = p.delta(s1, k);
                    if !subset(&d1, &ds) {
                        out.push((a, Key::Long(d1.clone(), ds.clone()), StepKind::Inside));
                    }
                    if p.hits_final(&d1) {
                        out.push((a, Key::Left(vec![], union(&ds, &d1)), StepKind::Exit));
                    }
                }
            }
        }
        out
    };
    let show = |key: &Key| match key {
        Key::Left(rho, s) => {
            let v: String = rho.iter().map(|t| p.show(t)).collect();
            format!("left {v}{{q00}} S={}", p.show(s))
        }
        Key::Long(s1, s) => format!("long {} S={}", p.show(s1), p.show(s)),
    };
    explore(
        Key::Left(vec![], vec![]),
        limit,
        next,
        show,
        |k| matches!(k, Key::Left(..)),
        |k| matches!(k, Key::Left(..)).then_some(FinalKind::Plain),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum NKey {
    Boundary(Set),
    Long(Set, Set),
    Copy(Set),
}

/// Parsing automaton for a pattern with `ε ∈ L(a0)` and some nonempty word
/// in `L(a0)`: at each boundary the longest match is taken, and after a
/// nonempty match one letter is copied.
pub fn build_nullable_automaton(a0: &Nfa, alphabet: &Alphabet, limit: usize) -> Result<ParsingAutomaton, ParsingError> {
    if !a0.finals.contains(&a0.initial) {
        return Err(ParsingError::Precondition("pattern must accept ε"));
    }
    let p = Pattern::new(a0, alphabet)?;
    let q00 = vec![p.q00];
    let next = |key: &NKey| {
        let mut out = Vec::new();
        for (k, &a) in p.letters.iter().enumerate() {
            let s = match key {
                NKey::Boundary(s) | NKey::Long(_, s) | NKey::Copy(s) => s,
            };
            let ds = p.delta(s, k);
            if p.hits_final(&ds) {
                continue;
            }
            match key {
                NKey::Boundary(_) => {
                    let d0 = p.delta(&q00, k);
                    if !p.hits_final(&d0) {
                        out.push((a, NKey::Boundary(union(&ds, &d0)), StepKind::JumpThenPlain));
                    }
                    if !subset(&d0, &ds) {
                        out.push((a, NKey::Long(d0.clone(), ds.clone()), StepKind::Enter));
                    }
                    if p.hits_final(&d0) {
                        out.push((a, NKey::Copy(union(&ds, &d0)), StepKind::Single));
                    }
                }
                NKey::Long(s1, _) => {
                    let d1 = p.delta(s1, k);
                    if !subset(&d1, &ds) {
                        out.push((a, NKey::Long(d1.clone(), ds.clone()), StepKind::Inside));
                    }
                    if p.hits_final(&d1) {
                        out.push((a, NKey::Copy(union(&ds, &d1)), StepKind::Exit));
                    }
                }
                NKey::Copy(_) => out.push((a, NKey::Boundary(ds), StepKind::Plain)),
            }
        }
        out
    };
    let show = |key: &NKey| match key {
        NKey::Boundary(s) => format!("boundary S={}", p.show(s)),
        NKey::Long(s1, s) => format!("long {} S={}", p.show(s1), p.show(s)),
        NKey::Copy(s) => format!("copy S={}", p.show(s)),
    };
    explore(
        NKey::Boundary(vec![]),
        limit,
        next,
        show,
        |k| !matches!(k, NKey::Long(..)),
        |k| match k {
            NKey::Boundary(_) => Some(FinalKind::Jump),
            NKey::Copy(_) => Some(FinalKind::Plain),
            NKey::Long(..) => None,
        },
    )
}

/// Parsing automaton for a pattern whose language is exactly `{ε}`.
pub fn build_epsilon_automaton(alphabet: &Alphabet) -> ParsingAutomaton {
    ParsingAutomaton {
        labels: vec!["boundary".to_string()],
        initial: 0,
        edges: vec![alphabet.symbols().iter().map(|&a| (a, 0, StepKind::JumpThenPlain)).collect()],
        active: vec![true],
        finals: vec![Some(FinalKind::Jump)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::word;
    use crate::automata::compile;
    use crate::regex::parse_regex;
    use crate::semantics::{Matcher, MatchSpan};

    fn bin() -> Alphabet {
        Alphabet::from_str_symbols("01")
    }

    fn pat(text: &str) -> Nfa {
        compile(&parse_regex(text, &bin()).unwrap(), &bin())
    }

    #[test]
    fn red_examples() {
        assert_eq!(red(&[vec![], vec![7]]), vec![vec![7]]);
        assert_eq!(red(&[vec![1, 2], vec![1, 3], vec![2, 4]]), vec![vec![1, 2], vec![3], vec![4]]);
        assert_eq!(red(&[vec![1], vec![2]]), vec![vec![1], vec![2]]);
    }

    #[test]
    fn regex_automaton_parses_like_the_evaluator() {
        let e = parse_regex("0*01(1*+0*)", &bin()).unwrap();
        let a = build_regex_automaton(&pat("0*01(1*+0*)"), &bin(), usize::MAX).unwrap();
        let m = Matcher::new(&e);
        for v in bin().words_up_to(7) {
            assert_eq!(a.to_nfa().count_accepting_runs(&v), 1, "{v:?}");
            assert_eq!(a.parse(&v).unwrap(), m.spans(&v), "{v:?}");
        }
        assert_eq!(
            a.parse(&word("010101")).unwrap(),
            vec![MatchSpan { start: 0, len: 3 }, MatchSpan { start: 4, len: 2 }]
        );
    }

    #[test]
    fn nullable_automaton_parses_like_the_evaluator() {
        for text in ["0*", "(01)*", "0*+1", "(0+1)*1?", "1*01*"] {
            let e = parse_regex(text, &bin()).unwrap();
            let a = if e.nullable() {
                build_nullable_automaton(&pat(text), &bin(), usize::MAX).unwrap()
            } else {
                build_regex_automaton(&pat(text), &bin(), usize::MAX).unwrap()
            };
            let m = Matcher::new(&e);
            for v in bin().words_up_to(6) {
                assert_eq!(a.to_nfa().count_accepting_runs(&v), 1, "{text} on {v:?}");
                assert_eq!(a.parse(&v).unwrap(), m.spans(&v), "{text} on {v:?}");
            }
        }
    }

    #[test]
    fn epsilon_automaton() {
        let a = build_epsilon_automaton(&bin());
        let spans = a.parse(&word("01")).unwrap();
        assert_eq!(spans.len(), 3);
        assert!(spans.iter().all(|s| s.len == 0));
    }

    #[test]
    fn preconditions() {
        assert!(build_regex_automaton(&pat("0*"), &bin(), usize::MAX).is_err());
        assert!(build_nullable_automaton(&pat("0"), &bin(), usize::MAX).is_err());
        assert_eq!(
            build_regex_automaton(&pat("0*01"), &bin(), 2),
            Err(ParsingError::Exhausted)
        );
    }
}
