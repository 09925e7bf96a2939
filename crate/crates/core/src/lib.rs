//! Satisfiability of straight-line string constraints built from `replaceall`
//! (with letter, word or regular-expression patterns) and regular membership.
//!
//! The pipeline is: parse a [`formula::Formula`], classify it, desugar
//! concatenation, then run the elimination procedure in [`solver`], which
//! rewrites every `replaceall` into regular constraints on its arguments and
//! finishes with intersection-emptiness checks on source variables.

pub mod alphabet;
pub mod automata;
pub mod elimination;
pub mod formula;
pub mod gen;
pub mod oracle;
pub mod parsing;
pub mod regex;
pub mod report;
pub mod semantics;
pub mod solver;
pub mod worked;

pub use alphabet::{show, word, Alphabet, Symbol, Word};
pub use automata::{Nfa, TransitionGraph, Witness};
pub use formula::{parse_formula, Formula};
pub use regex::{parse_regex, Regex};
pub use semantics::{leftmost_longest_match, replace_all, MatchSpan};
pub use solver::{solve, SearchLimits, Verdict};
