//! Straight-line constraint formulas.

mod classify;
mod desugar;
pub mod graph;
mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::compile;
use crate::regex::Regex;

pub use classify::{
    classify, unsupported_reason, Classification, FragmentClass, REASON_CHARACTER, REASON_INDEXOF,
    REASON_LENGTH, REASON_VAR_PATTERN,
};
pub use desugar::{desugar_concat, Desugared};
pub use graph::{build_dependency_graph, DepGraph, EdgeKind};
pub use parse::parse_formula;

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(Word),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Const(Word),
    Regex(Regex),
    Var(Var),
}

/// How the elimination treats a (non-variable) pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternShape {
    Letter(Symbol),
    /// Length at least two.
    Word(Word),
    /// Language exactly `{ε}`.
    Epsilon,
    Regex(Regex),
}

impl Pattern {
    /// The regular expression denoted by a constant pattern.
    pub fn to_regex(&self) -> Option<Regex> {
        match self {
            Pattern::Const(w) => Some(crate::regex::word_regex(w)),
            Pattern::Regex(r) => Some(r.clone()),
            Pattern::Var(_) => None,
        }
    }

    pub fn shape(&self) -> Option<PatternShape> {
        let r = self.to_regex()?;
        Some(shape_of(&r))
    }
}

pub fn shape_of(r: &Regex) -> PatternShape {
    if let Some(w) = r.as_word() {
        return match w.len() {
            0 => PatternShape::Epsilon,
            1 => PatternShape::Letter(w[0]),
            _ => PatternShape::Word(w),
        };
    }
    let a = compile(r, &Alphabet::new(r.symbols()));
    if r.nullable() && a.graph.num_edges() == 0 {
        PatternShape::Epsilon
    } else {
        PatternShape::Regex(r.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    ReplaceAll {
        subject: Term,
        pattern: Pattern,
        replacement: Term,
    },
    Concat(Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub var: Var,
    pub rhs: Rhs,
    /// 1-based source line, 0 when synthesized.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub var: Var,
    pub regex: Regex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionKind {
    Length,
    Character,
    IndexOf,
}

/// A parsed atom from an undecidable extension; never interpreted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub kind: ExtensionKind,
    pub text: String,
    pub vars: Vec<Var>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Formula {
    /// Working alphabet; a superset of `user_alphabet` after desugaring.
    pub alphabet: Alphabet,
    /// The declared alphabet. Models are reported over it.
    pub user_alphabet: Alphabet,
    pub definitions: Vec<Definition>,
    pub memberships: Vec<Membership>,
    pub extensions: Vec<Extension>,
    /// Variables synthesized by the front end; omitted from reports.
    pub hidden: BTreeSet<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: variable `{var}` is defined twice")]
    DuplicateDefinition { var: Var, line: usize },
    #[error("line {line}: variable `{var}` is not declared")]
    Undeclared { var: Var, line: usize },
    #[error("definitions are cyclic through `{var}`")]
    Cyclic { var: Var },
}

impl Term {
    pub fn var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl Rhs {
    /// Variables referenced on the right-hand side (pattern variables included).
    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Rhs::ReplaceAll {
                subject,
                pattern,
                replacement,
            } => {
                let mut v: Vec<&Var> = subject.var().into_iter().collect();
                if let Pattern::Var(p) = pattern {
                    v.push(p);
                }
                v.extend(replacement.var());
                v
            }
            Rhs::Concat(a, b) => a.var().into_iter().chain(b.var()).collect(),
        }
    }
}

impl Formula {
    /// All string variables, in order of first appearance.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |v: &Var| {
            if seen.insert(v.clone()) {
                out.push(v.clone());
            }
        };
        for d in &self.definitions {
            push(&d.var);
            for v in d.rhs.vars() {
                push(v);
            }
        }
        for m in &self.memberships {
            push(&m.var);
        }
        for e in &self.extensions {
            for v in &e.vars {
                push(v);
            }
        }
        out
    }

    pub fn defined_vars(&self) -> BTreeSet<Var> {
        self.definitions.iter().map(|d| d.var.clone()).collect()
    }

    /// Variables never defined, in order of first appearance.
    pub fn source_vars(&self) -> Vec<Var> {
        let defined = self.defined_vars();
        self.variables().into_iter().filter(|v| !defined.contains(v)).collect()
    }

    pub fn definition_of(&self, x: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.var == x)
    }

    pub fn has_concat(&self) -> bool {
        self.definitions.iter().any(|d| matches!(d.rhs, Rhs::Concat(..)))
    }

    pub fn memberships_of<'a>(&'a self, x: &'a str) -> impl Iterator<Item = &'a Regex> + 'a {
        self.memberships.iter().filter(move |m| m.var == x).map(|m| &m.regex)
    }
}

/// Orders definitions so that every right-hand side only uses source variables
/// or variables defined earlier. Returns indices into `f.definitions`.
///
/// Among the definitions that are ready, the one appearing first in the input
/// is taken, so an already ordered input keeps its order.
pub fn check_straight_line(f: &Formula) -> Result<Vec<usize>, FormulaError> {
    let index: HashMap<&str, usize> = f
        .definitions
        .iter()
        .enumerate()
        .map(|(i, d)| (d.var.as_str(), i))
        .collect();
    let n = f.definitions.len();
    let mut pending = vec![0usize; n];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, d) in f.definitions.iter().enumerate() {
        let deps: BTreeSet<usize> = d.rhs.vars().iter().filter_map(|v| index.get(v.as_str()).copied()).collect();
        if deps.contains(&i) {
            return Err(FormulaError::Cyclic { var: d.var.clone() });
        }
        pending[i] = deps.len();
        for j in deps {
            users[j].push(i);
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &u in &users[i] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.insert(u);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|i| !order.contains(i)).unwrap();
        return Err(FormulaError::Cyclic {
            var: f.definitions[stuck].var.clone(),
        });
    }
    Ok(order)
}

fn quote(w: &[Symbol]) -> String {
    let mut s = String::from("\"");
    for &c in w {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

fn regex_literal(r: &Regex) -> String {
    format!("/{}/", r.to_string().replace('/', "\\/"))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::Const(w) => write!(f, "{}", quote(w)),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Const(w) => write!(f, "{}", quote(w)),
            Pattern::Regex(r) => write!(f, "{}", regex_literal(r)),
            Pattern::Var(v) => write!(f, "{}", v),
        }
    }
}

impl fmt::Display for Formula {
    /// Renders the formula in the input syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet {};", quote(self.alphabet.symbols()))?;
        for d in &self.definitions {
            match &d.rhs {
                Rhs::ReplaceAll {
                    subject,
                    pattern,
                    replacement,
                } => writeln!(f, "{} := replaceall({}, {}, {});", d.var, subject, pattern, replacement)?,
                Rhs::Concat(a, b) => writeln!(f, "{} := {} . {};", d.var, a, b)?,
            }
        }
        for m in &self.memberships {
            writeln!(f, "assert {} in {};", m.var, regex_literal(&m.regex))?;
        }
        for e in &self.extensions {
            writeln!(f, "assert {};", e.text)?;
        }
        Ok(())
    }
}
