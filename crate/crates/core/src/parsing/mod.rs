//! Parsing automata: automata whose unique accepting run on a word marks the
//! matches that `replaceall` rewrites.
//!
//! Every construction yields a [`ParsingAutomaton`], whose edges carry a
//! [`StepKind`] telling the product construction in the elimination how the
//! subject-side automaton moves along. A run's kinds determine its spans
//! ([`ParsingAutomaton::spans_of_run`]).

mod leftmost;
mod profile;

use std::sync::Arc;

use thiserror::Error;

use crate::alphabet::Symbol;
use crate::automata::{Exhausted, Nfa, State, TransitionGraph};
use crate::semantics::MatchSpan;

pub use leftmost::{build_epsilon_automaton, build_nullable_automaton, build_regex_automaton, normalize_initial, red};
pub use profile::{build_const_automaton, show_profile, window_profiles, Profile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParsingError {
    #[error("parsing automaton exceeds the state budget")]
    Exhausted,
    #[error("{0}")]
    Precondition(&'static str),
}

impl From<Exhausted> for ParsingError {
    fn from(_: Exhausted) -> Self {
        ParsingError::Exhausted
    }
}

/// How a parsing step relates to the matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    /// The letter lies outside every match.
    Plain,
    /// The letter starts a match of length at least two.
    Enter,
    /// The letter continues a match without ending it.
    Inside,
    /// The letter ends a match of length at least two.
    Exit,
    /// The letter is a whole match.
    Single,
    /// An empty match sits just before the letter, which is then copied.
    JumpThenPlain,
}

/// Acceptance at the end of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FinalKind {
    Plain,
    /// Accepting after one more empty match at the end.
    Jump,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsingAutomaton {
    pub labels: Vec<String>,
    pub initial: State,
    /// `edges[p]`: `(letter, target, kind)`, sorted.
    pub edges: Vec<Vec<(Symbol, State, StepKind)>>,
    /// Outside a match: the subject automaton may take ε-moves here.
    pub active: Vec<bool>,
    pub finals: Vec<Option<FinalKind>>,
}

impl ParsingAutomaton {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// The underlying NFA with every final kind accepting.
    pub fn to_nfa(&self) -> Nfa {
        let mut g = TransitionGraph::new(0);
        for l in &self.labels {
            g.add_state(Some(l.clone()));
        }
        for (p, es) in self.edges.iter().enumerate() {
            for &(a, q, _) in es {
                g.add_edge(p, Some(a), q);
            }
        }
        g.normalize();
        let finals = (0..self.num_states()).filter(|&q| self.finals[q].is_some());
        Nfa::new(Arc::new(g), self.initial, finals).expect("states in range")
    }

    /// Spans encoded by a run (`run.len() == w.len() + 1`), or `None` if the
    /// run is not an accepting run on `w`.
    pub fn spans_of_run(&self, w: &[Symbol], run: &[State]) -> Option<Vec<MatchSpan>> {
        if run.len() != w.len() + 1 || run[0] != self.initial {
            return None;
        }
        let mut spans = Vec::new();
        let mut open = None;
        for (i, &a) in w.iter().enumerate() {
            let &(_, _, kind) = self.edges[run[i]].iter().find(|&&(b, q, _)| b == a && q == run[i + 1])?;
            match kind {
                StepKind::Plain | StepKind::Inside => {}
                StepKind::Enter => open = Some(i),
                StepKind::Exit => {
                    let start = open.take()?;
                    spans.push(MatchSpan { start, len: i + 1 - start });
                }
                StepKind::Single => spans.push(MatchSpan { start: i, len: 1 }),
                StepKind::JumpThenPlain => spans.push(MatchSpan { start: i, len: 0 }),
            }
        }
        match self.finals[*run.last().unwrap()]? {
            FinalKind::Plain => {}
            FinalKind::Jump => spans.push(MatchSpan { start: w.len(), len: 0 }),
        }
        Some(spans)
    }

    /// Spans of the accepting run on `w`, if one exists.
    pub fn parse(&self, w: &[Symbol]) -> Option<Vec<MatchSpan>> {
        let run = self.to_nfa().accepting_run(w)?;
        self.spans_of_run(w, &run)
    }
}

/// Explores states reachable from an initial key, materializing only those.
pub(crate) struct Explorer<K> {
    index: std::collections::HashMap<K, State>,
    keys: Vec<K>,
    limit: usize,
}

impl<K: Clone + Eq + std::hash::Hash> Explorer<K> {
    pub(crate) fn new(limit: usize) -> Self {
        Explorer {
            index: Default::default(),
            keys: Vec::new(),
            limit,
        }
    }

    pub(crate) fn intern(&mut self, k: K) -> Result<State, Exhausted> {
        if let Some(&s) = self.index.get(&k) {
            return Ok(s);
        }
        if self.keys.len() >= self.limit {
            return Err(Exhausted);
        }
        self.index.insert(k.clone(), self.keys.len());
        self.keys.push(k);
        Ok(self.keys.len() - 1)
    }

    pub(crate) fn get(&self, s: State) -> Option<K> {
        self.keys.get(s).cloned()
    }

    pub(crate) fn len(&self) -> usize {
        self.keys.len()
    }
}

/// The parsing automaton for pattern `e`, chosen by its shape: a word of
/// length at least two, `{ε}`, a nullable regex, or any other regex.
pub fn parsing_automaton(e: &crate::regex::Regex, alphabet: &crate::alphabet::Alphabet, limit: usize) -> Result<ParsingAutomaton, ParsingError> {
    use crate::automata::{compile, minimize};
    use crate::formula::PatternShape;
    let a0 = || minimize(&compile(e, alphabet), alphabet);
    match crate::formula::shape_of(e) {
        PatternShape::Word(u) => build_const_automaton(&u, alphabet, limit),
        PatternShape::Epsilon => Ok(build_epsilon_automaton(alphabet)),
        _ if e.nullable() => build_nullable_automaton(&a0(), alphabet, limit),
        _ => build_regex_automaton(&a0(), alphabet, limit),
    }
}

/// True iff ε is in the language of `r`.
pub fn epsilon_member(r: &crate::regex::Regex) -> bool {
    r.nullable()
}
