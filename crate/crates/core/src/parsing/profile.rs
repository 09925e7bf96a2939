//! Window profiles and the parsing automaton for a constant pattern `u`, `|u| >= 2`.
//!
//! A profile has `|u| - 1` bits; bit `j` (1-based) is set iff the last `j`
//! letters read equal `u[1..j]`.

use std::collections::BTreeSet;

use super::{Explorer, FinalKind, ParsingAutomaton, ParsingError, StepKind};
use crate::alphabet::{Alphabet, Symbol};

pub type Profile = Vec<bool>;

fn step(u: &[Symbol], w: &[bool], a: Symbol) -> Profile {
    (0..u.len() - 1)
        .map(|i| a == u[i] && (i == 0 || w[i - 1]))
        .collect()
}

/// The last bit is clear or `a` does not complete an occurrence.
fn no_occurrence(u: &[Symbol], w: &[bool], a: Symbol) -> bool {
    !w[u.len() - 2] || a != u[u.len() - 1]
}

pub fn show_profile(w: &[bool]) -> String {
    w.iter().map(|&b| if b { '⊤' } else { '⊥' }).collect()
}

/// Profiles of all positions of all nonempty words over `alphabet`.
///
/// # Panics
/// If `|u| < 2`.
pub fn window_profiles(u: &[Symbol], alphabet: &Alphabet) -> BTreeSet<Profile> {
    assert!(u.len() >= 2, "window profiles need |u| >= 2");
    let zero = vec![false; u.len() - 1];
    let mut seen: BTreeSet<Profile> = alphabet.symbols().iter().map(|&a| step(u, &zero, a)).collect();
    let mut todo: Vec<Profile> = seen.iter().cloned().collect();
    while let Some(w) = todo.pop() {
        for &a in alphabet.symbols() {
            let next = step(u, &w, a);
            if seen.insert(next.clone()) {
                todo.push(next);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Q0,
    Search(Profile),
    /// `Verify(i, w)`: `u[1..i]` read inside the current match.
    Verify(usize, Profile),
}

/// The automaton whose unique accepting run on `v` returns to `q0` exactly
/// at the end of each iterated leftmost occurrence of `u`.
pub fn build_const_automaton(u: &[Symbol], alphabet: &Alphabet, limit: usize) -> Result<ParsingAutomaton, ParsingError> {
    if u.len() < 2 {
        return Err(ParsingError::Precondition("constant parsing automata need |u| >= 2"));
    }
    let k = u.len();
    let mut ex = Explorer::new(limit);
    let zero = vec![false; k - 1];
    ex.intern(Key::Q0)?;
    let mut edges: Vec<Vec<(Symbol, usize, StepKind)>> = Vec::new();
    let mut s = 0;
    while s < ex.len() {
        let key = ex.get(s).unwrap();
        let mut out = Vec::new();
        for &a in alphabet.symbols() {
            match &key {
                Key::Q0 | Key::Search(_) => {
                    let w = match &key {
                        Key::Search(w) => w,
                        _ => &zero,
                    };
                    if !no_occurrence(u, w, a) {
                        continue;
                    }
                    let w2 = step(u, w, a);
                    out.push((a, ex.intern(Key::Search(w2.clone()))?, StepKind::Plain));
                    if a == u[0] {
                        out.push((a, ex.intern(Key::Verify(1, w2))?, StepKind::Enter));
                    }
                }
                Key::Verify(i, w) if *i < k - 1 => {
                    if w[i - 1] && a == u[*i] && no_occurrence(u, w, a) {
                        out.push((a, ex.intern(Key::Verify(i + 1, step(u, w, a)))?, StepKind::Inside));
                    }
                }
                Key::Verify(_, w) => {
                    if w[k - 2] && a == u[k - 1] {
                        out.push((a, ex.intern(Key::Q0)?, StepKind::Exit));
                    }
                }
            }
        }
        out.sort();
        edges.push(out);
        s += 1;
    }
    let keys: Vec<Key> = (0..ex.len()).map(|s| ex.get(s).unwrap()).collect();
    let outside = |k: &Key| !matches!(k, Key::Verify(..));
    Ok(ParsingAutomaton {
        labels: keys
            .iter()
            .map(|k| match k {
                Key::Q0 => "q0".to_string(),
                Key::Search(w) => format!("search {}", show_profile(w)),
                Key::Verify(i, w) => format!("verify {i} {}", show_profile(w)),
            })
            .collect(),
        initial: 0,
        edges,
        active: keys.iter().map(outside).collect(),
        finals: keys.iter().map(|k| outside(k).then_some(FinalKind::Plain)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::word;
    use crate::semantics::MatchSpan;

    fn bin() -> Alphabet {
        Alphabet::from_str_symbols("01")
    }

    #[test]
    fn profiles_of_010() {
        let p = window_profiles(&word("010"), &bin());
        let shown: BTreeSet<String> = p.iter().map(|w| show_profile(w)).collect();
        assert_eq!(shown, ["⊥⊥", "⊤⊥", "⊥⊤"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn profiles_of_aa() {
        let p = window_profiles(&word("aa"), &Alphabet::from_str_symbols("ab"));
        assert_eq!(p, [vec![false], vec![true]].into());
    }

    #[test]
    fn automaton_for_010() {
        let a = build_const_automaton(&word("010"), &bin(), usize::MAX).unwrap();
        let s = a.labels.iter().position(|l| l == "search ⊥⊤").unwrap();
        assert!(a.edges[s].iter().all(|&(c, _, _)| c != '0'));
        let v = word("01010101");
        assert_eq!(a.to_nfa().count_accepting_runs(&v), 1);
        assert_eq!(
            a.parse(&v).unwrap(),
            vec![MatchSpan { start: 0, len: 3 }, MatchSpan { start: 4, len: 3 }]
        );
        assert_eq!(a.parse(&word("1111")).unwrap(), vec![]);
    }
}
