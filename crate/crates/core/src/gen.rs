//! Seeded random instances for differential and property testing.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Word};
use crate::automata::{Nfa, TransitionGraph};
use crate::formula::{Definition, DepGraph, EdgeKind, Formula, Membership, Pattern, Rhs, Term};
use crate::regex::{alt, cat, lit, star, Regex};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut GenRng, alphabet: &Alphabet, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *alphabet.symbols().choose(rng).unwrap()).collect()
}

/// A regex with exactly `size` AST nodes (`size >= 1`), without `∅` or `ε` leaves.
pub fn random_regex(rng: &mut GenRng, alphabet: &Alphabet, size: usize) -> Regex {
    match size {
        0 | 1 => lit(*alphabet.symbols().choose(rng).unwrap()),
        2 => star(random_regex(rng, alphabet, 1)),
        _ => match rng.gen_range(0..3) {
            0 => star(random_regex(rng, alphabet, size - 1)),
            k => {
                let left = rng.gen_range(1..size - 1);
                let (a, b) = (random_regex(rng, alphabet, left), random_regex(rng, alphabet, size - 1 - left));
                if k == 1 {
                    cat(a, b)
                } else {
                    alt(a, b)
                }
            }
        },
    }
}

/// A random ε-free automaton with `states` states, state 0 initial.
pub fn random_nfa(rng: &mut GenRng, alphabet: &Alphabet, states: usize) -> Nfa {
    let mut g = TransitionGraph::new(states);
    for p in 0..states {
        for &a in alphabet.symbols() {
            for q in 0..states {
                if rng.gen_bool(0.35) {
                    g.add_edge(p, Some(a), q);
                }
            }
        }
    }
    g.normalize();
    let mut finals: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
    if finals.is_empty() {
        finals.push(rng.gen_range(0..states));
    }
    Nfa::new(std::sync::Arc::new(g), 0, finals).unwrap()
}

fn union(a: Option<Regex>, b: Option<Regex>) -> Option<Regex> {
    match (a, b) {
        (None, r) | (r, None) => r,
        (Some(a), Some(b)) if a == b => Some(a),
        (Some(a), Some(b)) => Some(alt(a, b)),
    }
}

fn concat(a: Regex, b: Regex) -> Regex {
    match (a, b) {
        (Regex::Epsilon, r) | (r, Regex::Epsilon) => r,
        (a, b) => cat(a, b),
    }
}

fn kleene(a: Option<Regex>) -> Regex {
    match a {
        None | Some(Regex::Epsilon) => Regex::Epsilon,
        Some(r @ Regex::Star(_)) => r,
        Some(r) => star(r),
    }
}

/// A regex for `a`, by state elimination.
pub fn nfa_to_regex(a: &Nfa) -> Regex {
    let n = a.num_states();
    let (s, f) = (n, n + 1);
    // r[(p, q)]: label of the generalized edge from p to q.
    let mut r: BTreeMap<(usize, usize), Regex> = BTreeMap::new();
    let add = |r: &mut BTreeMap<(usize, usize), Regex>, p, q, e: Regex| {
        let cur = r.remove(&(p, q));
        r.insert((p, q), union(cur, Some(e)).unwrap());
    };
    for (p, l, q) in a.graph.edges() {
        add(&mut r, p, q, l.map(lit).unwrap_or(Regex::Epsilon));
    }
    add(&mut r, s, a.initial, Regex::Epsilon);
    for &q in &a.finals {
        add(&mut r, q, f, Regex::Epsilon);
    }
    for k in 0..n {
        let loop_k = kleene(r.remove(&(k, k)));
        let ins: Vec<(usize, Regex)> = r.iter().filter(|((_, q), _)| *q == k).map(|(&(p, _), e)| (p, e.clone())).collect();
        let outs: Vec<(usize, Regex)> = r.iter().filter(|((p, _), _)| *p == k).map(|(&(_, q), e)| (q, e.clone())).collect();
        r.retain(|&(p, q), _| p != k && q != k);
        for (p, e1) in &ins {
            for (q, e2) in &outs {
                add(&mut r, *p, *q, concat(concat(e1.clone(), loop_k.clone()), e2.clone()));
            }
        }
    }
    r.remove(&(s, f)).unwrap_or(Regex::Empty)
}

#[derive(Debug, Clone)]
pub struct FormulaConfig {
    pub max_definitions: usize,
    pub max_memberships: usize,
    /// States of the automata the membership regexes are derived from.
    pub max_states: usize,
    pub max_pattern_size: usize,
    /// Allow `x := s . t` definitions.
    pub concat: bool,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        FormulaConfig {
            max_definitions: 2,
            max_memberships: 3,
            max_states: 4,
            max_pattern_size: 6,
            concat: false,
        }
    }
}

fn random_pattern(rng: &mut GenRng, alphabet: &Alphabet, max_size: usize) -> Pattern {
    match rng.gen_range(0..4) {
        0 => Pattern::Const(vec![*alphabet.symbols().choose(rng).unwrap()]),
        1 => {
            let n = rng.gen_range(2..=3);
            Pattern::Const((0..n).map(|_| *alphabet.symbols().choose(rng).unwrap()).collect())
        }
        _ => {
            let size = rng.gen_range(1..=max_size);
            Pattern::Regex(random_regex(rng, alphabet, size))
        }
    }
}

/// A straight-line formula over `{0, 1}`: definitions `x1, x2, ...` in order,
/// sources `y1, y2, ...`, memberships derived from small random automata.
pub fn random_formula(rng: &mut GenRng, cfg: &FormulaConfig) -> Formula {
    let alphabet = Alphabet::from_str_symbols("01");
    let mut defined: Vec<String> = Vec::new();
    let mut sources: Vec<String> = Vec::new();
    let mut definitions = Vec::new();
    let ndefs = rng.gen_range(1..=cfg.max_definitions.max(1));
    for i in 0..ndefs {
        let term = |rng: &mut GenRng, defined: &Vec<String>, sources: &mut Vec<String>| -> Term {
            let pick = rng.gen_range(0..10);
            if pick == 0 {
                Term::Const(random_word(rng, &alphabet, 2))
            } else if pick <= 3 && !defined.is_empty() {
                Term::Var(defined.choose(rng).unwrap().clone())
            } else if pick <= 5 && !sources.is_empty() {
                Term::Var(sources.choose(rng).unwrap().clone())
            } else {
                sources.push(format!("y{}", sources.len() + 1));
                Term::Var(sources.last().unwrap().clone())
            }
        };
        let s = term(rng, &defined, &mut sources);
        let t = term(rng, &defined, &mut sources);
        let rhs = if cfg.concat && rng.gen_bool(0.4) {
            Rhs::Concat(s, t)
        } else {
            Rhs::ReplaceAll {
                subject: s,
                pattern: random_pattern(rng, &alphabet, cfg.max_pattern_size),
                replacement: t,
            }
        };
        let x = format!("x{}", i + 1);
        definitions.push(Definition {
            var: x.clone(),
            rhs,
            line: 0,
        });
        defined.push(x);
    }
    let all: Vec<String> = defined.iter().chain(&sources).cloned().collect();
    let nm = rng.gen_range(1..=cfg.max_memberships.max(1));
    let memberships = (0..nm)
        .map(|k| {
            // The last defined variable is constrained first; it is the interesting one.
            let var = if k == 0 { defined.last().unwrap().clone() } else { all.choose(rng).unwrap().clone() };
            let states = rng.gen_range(1..=cfg.max_states.max(1));
            Membership {
                var,
                regex: nfa_to_regex(&random_nfa(rng, &alphabet, states)),
            }
        })
        .collect();
    Formula {
        alphabet: alphabet.clone(),
        user_alphabet: alphabet,
        definitions,
        memberships,
        extensions: Vec::new(),
        hidden: Default::default(),
    }
}

/// A random DAG on `n` vertices: edges go from higher to lower indices.
pub fn random_dag(rng: &mut GenRng, n: usize, density: f64) -> DepGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..a {
            if rng.gen_bool(density) {
                let kind = if rng.gen_bool(0.5) { EdgeKind::L } else { EdgeKind::R };
                edges.push((a, kind, b));
            }
        }
    }
    DepGraph::from_edges(n, &edges)
}

/// A dependency graph of a random straight-line formula on `n` vertices:
/// each vertex above the first `sources` gets one l-edge and one r-edge to
/// lower vertices (possibly the same one).
pub fn random_dependency_graph(rng: &mut GenRng, n: usize) -> DepGraph {
    let sources = rng.gen_range(1..=n.clamp(1, 3));
    let mut edges = Vec::new();
    for a in sources..n {
        edges.push((a, EdgeKind::L, rng.gen_range(0..a)));
        edges.push((a, EdgeKind::R, rng.gen_range(0..a)));
    }
    DepGraph::from_edges(n, &edges)
}
