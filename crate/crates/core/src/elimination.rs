//! Elimination of one `x := replaceall(y, e, z)` definition.
//!
//! The constraints on `x` are succinct pairs `(T, P)`: `x` is accepted by
//! `T` from `q` to `q'` for every `(q, q') ∈ P`. For each such constraint a
//! guess `U ⊆ Q × Q` says between which states of `T` the copies of `z`
//! inserted by the replacement are read. Then
//! * `z` gets `(T, U)` (skipped when `U` is empty), and
//! * `y` gets `(B, P')`, where `B` runs `T` on `replaceall(y, e, z)` while
//!   reading `y`, jumping along a pair of `U` over each match.
//!
//! Guesses are not drawn from all subsets of `Q × Q`: only the pair sets
//! realized by some candidate value of `z` are tried (see [`candidate_guesses`]).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use crate::alphabet::{Alphabet, Symbol};
use crate::automata::{remove_epsilon, shortest_witness_bounded, with_endpoints, Exhausted, Label, Nfa, State, TransitionGraph};
use crate::parsing::{FinalKind, ParsingAutomaton, StepKind};

pub type Pair = (State, State);

/// `(T, P)`: the conjunction over `(q, q') ∈ P` of `L(T, q, {q'})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccinctConstraint {
    pub graph: Arc<TransitionGraph>,
    pub pairs: BTreeSet<Pair>,
}

impl SuccinctConstraint {
    /// One ε-free automaton per pair.
    pub fn nfas(&self) -> Vec<Nfa> {
        self.pairs
            .iter()
            .map(|&(q, q2)| remove_epsilon(&with_endpoints(&self.graph, q, q2).expect("pair states are valid")))
            .collect()
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.pairs
            .iter()
            .all(|&(q, q2)| with_endpoints(&self.graph, q, q2).expect("pair states are valid").accepts(w))
    }
}

/// How a definition's pattern is parsed.
#[derive(Debug, Clone)]
pub enum PatternAutomaton {
    /// A single letter: `B` is `T` with its `a`-edges replaced by the pairs.
    Letter(Symbol),
    Parser(Arc<ParsingAutomaton>),
}

/// A definition `x := replaceall(y, e, z)` over variable indices.
#[derive(Debug, Clone)]
pub struct Step {
    pub def: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub pattern: PatternAutomaton,
}

/// `E(v)` for every variable `v`, by index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintEnv {
    pub constraints: Vec<Vec<SuccinctConstraint>>,
    /// Definitions already eliminated.
    pub eliminated: BTreeSet<usize>,
}

impl ConstraintEnv {
    pub fn total(&self) -> usize {
        self.constraints.iter().map(Vec::len).sum()
    }
}

/// Every nondeterministic choice of a search branch.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GuessTrace {
    /// `(membership index, chosen final state)`, in membership order.
    pub finals: Vec<(usize, State)>,
    /// `(variable name, per-constraint pair sets)`, in elimination order.
    pub steps: Vec<(String, Vec<BTreeSet<Pair>>)>,
}

impl fmt::Display for GuessTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(i, q) in &self.finals {
            writeln!(f, "final {i} {q}")?;
        }
        for (x, guesses) in &self.steps {
            for (j, u) in guesses.iter().enumerate() {
                let pairs: Vec<String> = u.iter().map(|(p, q)| format!("({p},{q})")).collect();
                writeln!(f, "step {x} {j} {{{}}}", pairs.join(","))?;
            }
        }
        Ok(())
    }
}

/// State and time limits shared by one search, plus size telemetry.
#[derive(Debug)]
pub struct Budget {
    pub max_states: usize,
    pub deadline: Option<Instant>,
    pub peak_states: AtomicUsize,
}

impl Budget {
    pub fn new(max_states: usize, deadline: Option<Instant>) -> Self {
        Budget {
            max_states,
            deadline,
            peak_states: AtomicUsize::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(usize::MAX, None)
    }

    pub fn record(&self, states: usize) {
        self.peak_states.fetch_max(states, Ordering::Relaxed);
    }

    pub fn check_time(&self) -> Result<(), Exhausted> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Exhausted),
            _ => Ok(()),
        }
    }

    fn check_states(&self, n: usize) -> Result<(), Exhausted> {
        if n > self.max_states {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }
}

/// `B` before a guess is fixed: edges that jump over a match carry the pair used.
#[derive(Debug, Clone)]
pub struct AnnotatedB {
    out: Vec<Vec<(Label, State, Option<Pair>)>>,
    labels: Vec<String>,
    /// State of `T` to its start node in `B`.
    pub start: BTreeMap<State, State>,
    /// State of `T` to its end node in `B`.
    pub end: BTreeMap<State, State>,
}

impl AnnotatedB {
    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    /// `B` for the guess `u`, trimmed, with `p` mapped onto start and end nodes.
    pub fn restrict(&self, u: &BTreeSet<Pair>, p: &BTreeSet<Pair>) -> SuccinctConstraint {
        let mut g = TransitionGraph::new(0);
        for l in &self.labels {
            g.add_state(Some(l.clone()));
        }
        for (s, es) in self.out.iter().enumerate() {
            for &(l, t, ann) in es {
                if ann.is_none_or(|pr| u.contains(&pr)) {
                    g.add_edge(s, l, t);
                }
            }
        }
        g.normalize();
        let starts: Vec<State> = p.iter().map(|(q, _)| self.start[q]).collect();
        let ends: Vec<State> = p.iter().map(|(_, q)| self.end[q]).collect();
        let reach = g.reachable_from(starts.iter().copied());
        let coreach = g.coreachable_to(ends.iter().copied());
        let keep: Vec<bool> = (0..g.num_states())
            .map(|s| (reach[s] && coreach[s]) || starts.contains(&s) || ends.contains(&s))
            .collect();
        let (g, map) = g.restrict(&keep);
        SuccinctConstraint {
            graph: Arc::new(g),
            pairs: p.iter().map(|(q, q2)| (map[self.start[q]].unwrap(), map[self.end[q2]].unwrap())).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum BKey {
    Node(State, State),
    End(State),
}

/// Builds `B` for `T` and a pattern with every pair of `candidates` allowed.
/// Only nodes reachable from the starts of `p` are created.
pub fn build_annotated(
    t: &TransitionGraph,
    pattern: &PatternAutomaton,
    candidates: &BTreeSet<Pair>,
    p: &BTreeSet<Pair>,
    budget: &Budget,
) -> Result<AnnotatedB, Exhausted> {
    let mut by_source: BTreeMap<State, Vec<State>> = BTreeMap::new();
    for &(q, q2) in candidates {
        by_source.entry(q).or_default().push(q2);
    }
    let pa = match pattern {
        PatternAutomaton::Letter(a) => {
            let n = t.num_states();
            let mut out: Vec<Vec<(Label, State, Option<Pair>)>> = vec![Vec::new(); n];
            for (q, l, q2) in t.edges() {
                if l != Some(*a) {
                    out[q].push((l, q2, None));
                }
            }
            for &(q, q2) in candidates {
                out[q].push((Some(*a), q2, Some((q, q2))));
            }
            for es in &mut out {
                es.sort_unstable();
                es.dedup();
            }
            budget.record(n);
            return Ok(AnnotatedB {
                out,
                labels: (0..n).map(|q| t.label(q)).collect(),
                start: (0..n).map(|q| (q, q)).collect(),
                end: (0..n).map(|q| (q, q)).collect(),
            });
        }
        PatternAutomaton::Parser(pa) => pa,
    };
    let mut index: HashMap<BKey, State> = HashMap::new();
    let mut keys: Vec<BKey> = Vec::new();
    let mut intern = |k: BKey, keys: &mut Vec<BKey>| -> Result<State, Exhausted> {
        if let Some(&s) = index.get(&k) {
            return Ok(s);
        }
        budget.check_states(keys.len() + 1)?;
        index.insert(k, keys.len());
        keys.push(k);
        Ok(keys.len() - 1)
    };
    let mut start = BTreeMap::new();
    let mut end = BTreeMap::new();
    for &(q, q2) in p {
        start.insert(q, intern(BKey::Node(q, pa.initial), &mut keys)?);
        end.insert(q2, intern(BKey::End(q2), &mut keys)?);
    }
    let mut out: Vec<Vec<(Label, State, Option<Pair>)>> = Vec::new();
    let mut s = 0;
    while s < keys.len() {
        if s % 1024 == 0 {
            budget.check_time()?;
        }
        let mut es = Vec::new();
        if let BKey::Node(q, ps) = keys[s] {
            if pa.active[ps] {
                for &(l, q2) in t.edges_from(q) {
                    if l.is_none() {
                        es.push((None, intern(BKey::Node(q2, ps), &mut keys)?, None));
                    }
                }
            }
            for &(a, ps2, kind) in &pa.edges[ps] {
                match kind {
                    StepKind::Plain => {
                        for &(l, q2) in t.edges_from(q) {
                            if l == Some(a) {
                                es.push((l, intern(BKey::Node(q2, ps2), &mut keys)?, None));
                            }
                        }
                    }
                    StepKind::Enter => {
                        if by_source.contains_key(&q) {
                            es.push((Some(a), intern(BKey::Node(q, ps2), &mut keys)?, None));
                        }
                    }
                    StepKind::Inside => es.push((Some(a), intern(BKey::Node(q, ps2), &mut keys)?, None)),
                    StepKind::Exit | StepKind::Single => {
                        for &q2 in by_source.get(&q).into_iter().flatten() {
                            es.push((Some(a), intern(BKey::Node(q2, ps2), &mut keys)?, Some((q, q2))));
                        }
                    }
                    StepKind::JumpThenPlain => {
                        for &mid in by_source.get(&q).into_iter().flatten() {
                            for &(l, q2) in t.edges_from(mid) {
                                if l == Some(a) {
                                    es.push((l, intern(BKey::Node(q2, ps2), &mut keys)?, Some((q, mid))));
                                }
                            }
                        }
                    }
                }
            }
            match pa.finals[ps] {
                Some(FinalKind::Plain) => {
                    if let Some(&e) = end.get(&q) {
                        es.push((None, e, None));
                    }
                }
                Some(FinalKind::Jump) => {
                    for &q2 in by_source.get(&q).into_iter().flatten() {
                        if let Some(&e) = end.get(&q2) {
                            es.push((None, e, Some((q, q2))));
                        }
                    }
                }
                None => {}
            }
        }
        es.sort_unstable();
        es.dedup();
        out.push(es);
        s += 1;
    }
    budget.record(keys.len());
    let tl = |q: State| t.label(q);
    let labels = keys
        .iter()
        .map(|k| match *k {
            BKey::Node(q, ps) => format!("({}, {})", tl(q), pa.labels[ps]),
            BKey::End(q) => format!("end {}", tl(q)),
        })
        .collect();
    Ok(AnnotatedB {
        out,
        labels,
        start,
        end,
    })
}

/// `B` for a fixed guess `tz`: the constraint added to the subject variable.
pub fn build_b(
    t: &Arc<TransitionGraph>,
    pattern: &PatternAutomaton,
    tz: &BTreeSet<Pair>,
    p: &BTreeSet<Pair>,
    budget: &Budget,
) -> Result<SuccinctConstraint, Exhausted> {
    Ok(build_annotated(t, pattern, tz, p, budget)?.restrict(tz, p))
}

/// Single-letter pattern: `T` with its `a`-edges replaced by `(q, a, q')` for `(q, q') ∈ tz`.
pub fn build_b_single(t: &TransitionGraph, a: Symbol, tz: &BTreeSet<Pair>) -> TransitionGraph {
    let mut g = TransitionGraph::new(0);
    for q in 0..t.num_states() {
        g.add_state(Some(t.label(q)));
    }
    for (q, l, q2) in t.edges() {
        if l != Some(a) {
            g.add_edge(q, l, q2);
        }
    }
    for &(q, q2) in tz {
        g.add_edge(q, Some(a), q2);
    }
    g.normalize();
    g
}

/// Memo of annotated products, keyed by the graph identity, definition, starts
/// and candidate pairs. Values keep their graph alive, so keys stay unique.
#[derive(Debug, Default)]
pub struct BCache {
    map: Mutex<HashMap<(usize, usize, Vec<Pair>, Vec<Pair>), (Arc<TransitionGraph>, Arc<AnnotatedB>)>>,
}

impl BCache {
    fn get_or_build(
        &self,
        step: &Step,
        c: &SuccinctConstraint,
        candidates: &BTreeSet<Pair>,
        budget: &Budget,
    ) -> Result<Arc<AnnotatedB>, Exhausted> {
        let key = (
            Arc::as_ptr(&c.graph) as usize,
            step.def,
            c.pairs.iter().copied().collect(),
            candidates.iter().copied().collect(),
        );
        if let Some((_, b)) = self.map.lock().unwrap().get(&key) {
            return Ok(Arc::clone(b));
        }
        let b = Arc::new(build_annotated(&c.graph, &step.pattern, candidates, &c.pairs, budget)?);
        self.map
            .lock()
            .unwrap()
            .insert(key, (Arc::clone(&c.graph), Arc::clone(&b)));
        Ok(b)
    }
}

pub type Guess = Vec<BTreeSet<Pair>>;

/// Materialized constraints of a variable.
pub fn var_nfas(env: &ConstraintEnv, v: usize) -> Vec<Nfa> {
    env.constraints[v].iter().flat_map(SuccinctConstraint::nfas).collect()
}

/// Whether the constraints on `v` have a common word.
pub fn satisfiable(env: &ConstraintEnv, v: usize, alphabet: &Alphabet, budget: &Budget) -> Result<bool, Exhausted> {
    let nfas = var_nfas(env, v);
    Ok(shortest_witness_bounded(&nfas, alphabet, budget.max_states, budget.deadline)?.is_some())
}

/// `(q, q')` with `q` reachable from a start of `c` and `q'` co-reachable to an end.
fn useful(c: &SuccinctConstraint) -> (Vec<bool>, Vec<bool>) {
    (
        c.graph.reachable_from(c.pairs.iter().map(|p| p.0)),
        c.graph.coreachable_to(c.pairs.iter().map(|p| p.1)),
    )
}

/// The guesses worth trying for `step`, in canonical order.
///
/// A guess is the type of a word `w` satisfying the current constraints on
/// the replacement: for each constraint `(T, P)` on `x`, the useful pairs
/// `(q, q')` with `w ∈ L(T, q, {q'})`. Guesses are listed in the order their
/// shortest witnesses `w` are found (length, then alphabet order).
///
/// This suffices: if `(y, z)` is a solution, the pairs used by a run of `T`
/// on `replaceall(y, e, z)` lie within the type of `z`, and `B` only grows
/// with the guess, so `y` is accepted under the type of `z` too.
pub fn candidate_guesses(
    env: &ConstraintEnv,
    step: &Step,
    alphabet: &Alphabet,
    budget: &Budget,
) -> Result<Vec<Guess>, Exhausted> {
    let ex = &env.constraints[step.x];
    if ex.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let z_nfas = var_nfas(env, step.z);
    let useful: Vec<(Vec<bool>, Vec<bool>)> = ex.iter().map(useful).collect();
    // rel[k][q]: states reached from q (a useful source) of constraint k's graph.
    type Rel = Vec<BTreeMap<State, BTreeSet<State>>>;
    type Node = (Rel, Vec<BTreeSet<State>>);
    let start: Node = (
        ex.iter()
            .zip(&useful)
            .map(|(c, (reach, _))| {
                (0..c.graph.num_states())
                    .filter(|&q| reach[q])
                    .map(|q| (q, c.graph.epsilon_closure(&[q].into())))
                    .collect()
            })
            .collect(),
        z_nfas.iter().map(|a| BTreeSet::from([a.initial])).collect(),
    );
    let mut seen: HashSet<Node> = HashSet::from([start.clone()]);
    let mut queue = std::collections::VecDeque::from([start]);
    let mut found: HashSet<Guess> = HashSet::new();
    let mut out = Vec::new();
    while let Some((rel, zs)) = queue.pop_front() {
        if seen.len() % 256 == 0 {
            budget.check_time()?;
        }
        if z_nfas.iter().zip(&zs).all(|(a, s)| s.iter().any(|q| a.finals.contains(q))) {
            let guess: Guess = rel
                .iter()
                .zip(&useful)
                .map(|(r, (_, coreach))| {
                    r.iter()
                        .flat_map(|(&q, ts)| ts.iter().filter(|&&t| coreach[t]).map(move |&t| (q, t)))
                        .collect()
                })
                .collect();
            if found.insert(guess.clone()) {
                out.push(guess);
            }
        }
        for &a in alphabet.symbols() {
            let zs2: Vec<BTreeSet<State>> = z_nfas.iter().zip(&zs).map(|(n, s)| n.graph.step(s, a)).collect();
            if zs2.iter().any(BTreeSet::is_empty) {
                continue;
            }
            let rel2: Rel = rel
                .iter()
                .zip(ex)
                .map(|(r, c)| {
                    r.iter()
                        .map(|(&q, ts)| (q, c.graph.epsilon_closure(&c.graph.step(ts, a))))
                        .collect()
                })
                .collect();
            let node = (rel2, zs2);
            if !seen.contains(&node) {
                if seen.len() >= budget.max_states {
                    return Err(Exhausted);
                }
                seen.insert(node.clone());
                queue.push_back(node);
            }
        }
    }
    budget.record(seen.len());
    Ok(out)
}

/// Removes the definition of `step.x` under the guess `guesses` (one pair set
/// per constraint on `x`, in order).
pub fn eliminate_vertex(
    env: &ConstraintEnv,
    step: &Step,
    guesses: &[BTreeSet<Pair>],
    budget: &Budget,
    cache: &BCache,
) -> Result<ConstraintEnv, Exhausted> {
    assert_eq!(guesses.len(), env.constraints[step.x].len(), "one guess per constraint");
    let mut next = env.clone();
    next.eliminated.insert(step.def);
    for (c, u) in env.constraints[step.x].iter().zip(guesses) {
        if !u.is_empty() {
            next.constraints[step.z].push(SuccinctConstraint {
                graph: Arc::clone(&c.graph),
                pairs: u.clone(),
            });
        }
        let b = match step.pattern {
            // Keep the state space of T, as in the single-letter edit.
            PatternAutomaton::Letter(a) => SuccinctConstraint {
                graph: Arc::new(build_b_single(&c.graph, a, u)),
                pairs: c.pairs.clone(),
            },
            PatternAutomaton::Parser(_) => cache.get_or_build(step, c, u, budget)?.restrict(u, &c.pairs),
        };
        next.constraints[step.y].push(b);
    }
    Ok(next)
}
