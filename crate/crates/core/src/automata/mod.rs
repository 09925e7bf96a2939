//! Nondeterministic finite automata.
//!
//! A [`TransitionGraph`] is a set of states `0..n` with labelled edges, where
//! `None` labels are ε-moves. An [`Nfa`] adds an initial state and a set of
//! finals. Graphs are shared through `Arc` so that many NFAs can re-designate
//! endpoints of the same graph without copying it.

pub mod dot;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::regex::Regex;

pub type State = usize;

/// Edge label; `None` is ε.
pub type Label = Option<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("state {state} out of range (graph has {states} states)")]
    InvalidState { state: State, states: usize },
}

/// Raised when a bounded search exceeds its state or time budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget exhausted")]
pub struct Exhausted;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransitionGraph {
    out: Vec<Vec<(Label, State)>>,
    labels: Vec<Option<String>>,
}

impl TransitionGraph {
    pub fn new(states: usize) -> Self {
        TransitionGraph {
            out: vec![Vec::new(); states],
            labels: vec![None; states],
        }
    }

    /// Builds a graph from an edge list. Edge endpoints must be `< states`.
    pub fn from_edges(states: usize, edges: &[(State, Label, State)]) -> Result<Self, AutomataError> {
        let mut g = TransitionGraph::new(states);
        for &(p, l, q) in edges {
            for s in [p, q] {
                if s >= states {
                    return Err(AutomataError::InvalidState { state: s, states });
                }
            }
            g.add_edge(p, l, q);
        }
        g.normalize();
        Ok(g)
    }

    pub fn add_state(&mut self, label: Option<String>) -> State {
        self.out.push(Vec::new());
        self.labels.push(label);
        self.out.len() - 1
    }

    /// Adds an edge; duplicates are removed by [`normalize`](Self::normalize).
    pub fn add_edge(&mut self, p: State, l: Label, q: State) {
        self.out[p].push((l, q));
    }

    /// Sorts and deduplicates adjacency lists.
    pub fn normalize(&mut self) {
        for adj in &mut self.out {
            adj.sort_unstable();
            adj.dedup();
        }
    }

    pub fn set_label(&mut self, q: State, label: String) {
        self.labels[q] = Some(label);
    }

    pub fn label(&self, q: State) -> String {
        self.labels[q].clone().unwrap_or_else(|| q.to_string())
    }

    pub fn has_labels(&self) -> bool {
        self.labels.iter().any(Option::is_some)
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn edges_from(&self, q: State) -> &[(Label, State)] {
        &self.out[q]
    }

    pub fn edges(&self) -> impl Iterator<Item = (State, Label, State)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(p, adj)| adj.iter().map(move |&(l, q)| (p, l, q)))
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn has_epsilon(&self) -> bool {
        self.edges().any(|(_, l, _)| l.is_none())
    }

    pub fn check_state(&self, q: State) -> Result<(), AutomataError> {
        if q < self.num_states() {
            Ok(())
        } else {
            Err(AutomataError::InvalidState {
                state: q,
                states: self.num_states(),
            })
        }
    }

    /// ε-closure of `set`.
    pub fn epsilon_closure(&self, set: &BTreeSet<State>) -> BTreeSet<State> {
        let mut seen = set.clone();
        let mut stack: Vec<State> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for &(l, q) in &self.out[p] {
                if l.is_none() && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// Successors of `set` on letter `a` (no closure applied).
    pub fn step(&self, set: &BTreeSet<State>, a: Symbol) -> BTreeSet<State> {
        set.iter()
            .flat_map(|&p| self.out[p].iter())
            .filter(|(l, _)| *l == Some(a))
            .map(|&(_, q)| q)
            .collect()
    }

    /// States reachable from `starts` (including them), following all edges.
    pub fn reachable_from(&self, starts: impl IntoIterator<Item = State>) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = Vec::new();
        for s in starts {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(p) = stack.pop() {
            for &(_, q) in &self.out[p] {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// States from which some state in `targets` is reachable.
    pub fn coreachable_to(&self, targets: impl IntoIterator<Item = State>) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<State>> = vec![Vec::new(); n];
        for (p, _, q) in self.edges() {
            rev[q].push(p);
        }
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for t in targets {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only states with `keep[q]`, renumbered in ascending order.
    /// Returns the new graph and the old-to-new map.
    pub fn restrict(&self, keep: &[bool]) -> (TransitionGraph, Vec<Option<State>>) {
        let mut map = vec![None; self.num_states()];
        let mut g = TransitionGraph::default();
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = Some(g.add_state(self.labels[q].clone()));
            }
        }
        for (p, l, q) in self.edges() {
            if let (Some(np), Some(nq)) = (map[p], map[q]) {
                g.add_edge(np, l, nq);
            }
        }
        g.normalize();
        (g, map)
    }
}

/// A witness word together with one run per witnessed automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: Word,
    /// `runs[i]` has length `word.len() + 1` and is a run of automaton `i`.
    pub runs: Vec<Vec<State>>,
}

impl Witness {
    /// True iff every run is an accepting run of the matching automaton on `word`.
    pub fn replays(&self, automata: &[Nfa]) -> bool {
        automata.len() == self.runs.len()
            && automata.iter().zip(&self.runs).all(|(a, run)| {
                run.len() == self.word.len() + 1
                    && run[0] == a.initial
                    && a.finals.contains(run.last().unwrap())
                    && self.word.iter().enumerate().all(|(i, &c)| {
                        a.graph.edges_from(run[i]).contains(&(Some(c), run[i + 1]))
                    })
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    pub graph: Arc<TransitionGraph>,
    pub initial: State,
    pub finals: BTreeSet<State>,
}

impl Nfa {
    pub fn new(
        graph: Arc<TransitionGraph>,
        initial: State,
        finals: impl IntoIterator<Item = State>,
    ) -> Result<Self, AutomataError> {
        graph.check_state(initial)?;
        let finals: BTreeSet<State> = finals.into_iter().collect();
        for &f in &finals {
            graph.check_state(f)?;
        }
        Ok(Nfa {
            graph,
            initial,
            finals,
        })
    }

    pub fn num_states(&self) -> usize {
        self.graph.num_states()
    }

    pub fn is_epsilon_free(&self) -> bool {
        !self.graph.has_epsilon()
    }

    /// The empty language: one state, no finals.
    pub fn empty() -> Self {
        Nfa {
            graph: Arc::new(TransitionGraph::new(1)),
            initial: 0,
            finals: BTreeSet::new(),
        }
    }

    /// Accepts `Σ*` for the given alphabet.
    pub fn universal(alphabet: &Alphabet) -> Self {
        let mut g = TransitionGraph::new(1);
        for &a in alphabet.symbols() {
            g.add_edge(0, Some(a), 0);
        }
        g.normalize();
        Nfa {
            graph: Arc::new(g),
            initial: 0,
            finals: [0].into(),
        }
    }

    /// Accepts exactly `w`.
    pub fn singleton(w: &[Symbol]) -> Self {
        let mut g = TransitionGraph::new(w.len() + 1);
        for (i, &c) in w.iter().enumerate() {
            g.add_edge(i, Some(c), i + 1);
        }
        g.normalize();
        Nfa {
            graph: Arc::new(g),
            initial: 0,
            finals: [w.len()].into(),
        }
    }

    /// Membership by subset simulation (ε-moves allowed).
    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut cur = self.graph.epsilon_closure(&[self.initial].into());
        for &c in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.graph.epsilon_closure(&self.graph.step(&cur, c));
        }
        cur.iter().any(|q| self.finals.contains(q))
    }

    /// Removes states not reachable from the initial state or not co-reachable
    /// to a final state. The initial state is always kept.
    pub fn trim(&self) -> Nfa {
        let reach = self.graph.reachable_from([self.initial]);
        let coreach = self.graph.coreachable_to(self.finals.iter().copied());
        let keep: Vec<bool> = (0..self.num_states())
            .map(|q| q == self.initial || (reach[q] && coreach[q]))
            .collect();
        let (g, map) = self.graph.restrict(&keep);
        Nfa {
            graph: Arc::new(g),
            initial: map[self.initial].unwrap(),
            finals: self.finals.iter().filter_map(|&f| map[f]).collect(),
        }
    }

    /// Number of accepting runs on `w`. Requires an ε-free automaton.
    pub fn count_accepting_runs(&self, w: &[Symbol]) -> u128 {
        debug_assert!(self.is_epsilon_free());
        let n = self.num_states();
        let mut cur = vec![0u128; n];
        cur[self.initial] = 1;
        for &c in w {
            let mut next = vec![0u128; n];
            for p in 0..n {
                if cur[p] == 0 {
                    continue;
                }
                for &(l, q) in self.graph.edges_from(p) {
                    if l == Some(c) {
                        next[q] = next[q].saturating_add(cur[p]);
                    }
                }
            }
            cur = next;
        }
        self.finals.iter().map(|&f| cur[f]).fold(0u128, |a, b| a.saturating_add(b))
    }

    /// Some accepting run on `w` (the smallest state at each step among those
    /// that can still reach acceptance). Requires an ε-free automaton.
    pub fn accepting_run(&self, w: &[Symbol]) -> Option<Vec<State>> {
        debug_assert!(self.is_epsilon_free());
        let n = self.num_states();
        // alive[i][q]: from q, w[i..] leads to a final.
        let mut alive = vec![vec![false; n]; w.len() + 1];
        for &f in &self.finals {
            alive[w.len()][f] = true;
        }
        for i in (0..w.len()).rev() {
            for p in 0..n {
                alive[i][p] = self
                    .graph
                    .edges_from(p)
                    .iter()
                    .any(|&(l, q)| l == Some(w[i]) && alive[i + 1][q]);
            }
        }
        if !alive[0][self.initial] {
            return None;
        }
        let mut run = vec![self.initial];
        for (i, &c) in w.iter().enumerate() {
            let p = *run.last().unwrap();
            let q = self
                .graph
                .edges_from(p)
                .iter()
                .filter(|&&(l, q)| l == Some(c) && alive[i + 1][q])
                .map(|&(_, q)| q)
                .min()?;
            run.push(q);
        }
        Some(run)
    }
}

/// Compiles a regular expression to a trimmed ε-free NFA with `L = L(r)`.
pub fn compile(r: &Regex, alphabet: &Alphabet) -> Nfa {
    debug_assert!(r.symbols().iter().all(|&c| alphabet.contains(c)));
    let mut g = TransitionGraph::default();
    let (s, e) = thompson(r, &mut g);
    g.normalize();
    let nfa = Nfa {
        graph: Arc::new(g),
        initial: s,
        finals: [e].into(),
    };
    remove_epsilon(&nfa).trim()
}

fn thompson(r: &Regex, g: &mut TransitionGraph) -> (State, State) {
    let s = g.add_state(None);
    let e = g.add_state(None);
    match r {
        Regex::Empty => {}
        Regex::Epsilon => g.add_edge(s, None, e),
        Regex::Literal(c) => g.add_edge(s, Some(*c), e),
        Regex::Union(a, b) => {
            let (sa, ea) = thompson(a, g);
            let (sb, eb) = thompson(b, g);
            g.add_edge(s, None, sa);
            g.add_edge(s, None, sb);
            g.add_edge(ea, None, e);
            g.add_edge(eb, None, e);
        }
        Regex::Concat(a, b) => {
            let (sa, ea) = thompson(a, g);
            let (sb, eb) = thompson(b, g);
            g.add_edge(s, None, sa);
            g.add_edge(ea, None, sb);
            g.add_edge(eb, None, e);
        }
        Regex::Star(a) => {
            let (sa, ea) = thompson(a, g);
            g.add_edge(s, None, sa);
            g.add_edge(s, None, e);
            g.add_edge(ea, None, sa);
            g.add_edge(ea, None, e);
        }
    }
    (s, e)
}

/// Language-preserving ε-elimination on the same state set.
pub fn remove_epsilon(a: &Nfa) -> Nfa {
    if a.is_epsilon_free() {
        return a.clone();
    }
    let g = &a.graph;
    let n = g.num_states();
    let mut out = TransitionGraph::new(n);
    let mut finals = BTreeSet::new();
    for q in 0..n {
        if let Some(l) = &g.labels[q] {
            out.set_label(q, l.clone());
        }
        let cl = g.epsilon_closure(&[q].into());
        if cl.iter().any(|p| a.finals.contains(p)) {
            finals.insert(q);
        }
        for &p in &cl {
            for &(l, r) in g.edges_from(p) {
                if l.is_some() {
                    out.add_edge(q, l, r);
                }
            }
        }
    }
    out.normalize();
    Nfa {
        graph: Arc::new(out),
        initial: a.initial,
        finals,
    }
}

/// Subset construction over the reachable subsets; the result is trimmed,
/// so it may be partial. State 0 is initial.
pub fn determinize(a: &Nfa, alphabet: &Alphabet) -> Nfa {
    let g = &a.graph;
    let start = g.epsilon_closure(&[a.initial].into());
    let mut index: HashMap<BTreeSet<State>, State> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut out = TransitionGraph::new(1);
    let mut i = 0;
    while i < sets.len() {
        for &c in alphabet.symbols() {
            let next = g.epsilon_closure(&g.step(&sets[i], c));
            if next.is_empty() {
                continue;
            }
            let j = *index.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                out.add_state(None)
            });
            out.add_edge(i, Some(c), j);
        }
        i += 1;
    }
    out.normalize();
    let finals = (0..sets.len()).filter(|&q| sets[q].iter().any(|p| a.finals.contains(p)));
    Nfa {
        graph: Arc::new(out),
        initial: 0,
        finals: finals.collect(),
    }
    .trim()
}

/// The minimal trimmed DFA for `L(a)`, states numbered in breadth-first
/// order from the initial state, so equal languages give equal automata.
pub fn minimize(a: &Nfa, alphabet: &Alphabet) -> Nfa {
    let d = determinize(a, alphabet);
    let n = d.num_states();
    let syms = alphabet.symbols();
    // Sink `n` completes the automaton.
    let delta = |q: State, c: Symbol| -> State {
        if q == n {
            return n;
        }
        d.graph.edges_from(q).iter().find(|e| e.0 == Some(c)).map_or(n, |e| e.1)
    };
    let mut class: Vec<usize> = (0..=n).map(|q| usize::from(d.finals.contains(&q))).collect();
    loop {
        let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..=n)
            .map(|q| {
                let key = (class[q], syms.iter().map(|&c| class[delta(q, c)]).collect());
                let k = sig.len();
                *sig.entry(key).or_insert(k)
            })
            .collect();
        let stable = sig.len() == class.iter().collect::<BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }
    // Renumber classes breadth-first. Since `d` is trimmed, only the sink is dead.
    let sink = class[n];
    let mut num: HashMap<usize, State> = HashMap::from([(class[d.initial], 0)]);
    let mut order = vec![d.initial];
    let mut out = TransitionGraph::new(1);
    let mut finals = BTreeSet::new();
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        if d.finals.contains(&q) {
            finals.insert(i);
        }
        for &c in syms {
            let r = delta(q, c);
            if class[r] == sink {
                continue;
            }
            let j = *num.entry(class[r]).or_insert_with(|| {
                order.push(r);
                out.add_state(None)
            });
            out.add_edge(i, Some(c), j);
        }
        i += 1;
    }
    out.normalize();
    Nfa {
        graph: Arc::new(out),
        initial: 0,
        finals,
    }
    .trim()
}

/// Product automaton; ε-moves of either side are interleaved.
/// State labels are `(left,right)` pairs of the operand labels.
pub fn product(a: &Nfa, b: &Nfa) -> Nfa {
    let mut g = TransitionGraph::default();
    let mut index: HashMap<(State, State), State> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut finals = BTreeSet::new();
    let mut intern = |g: &mut TransitionGraph, queue: &mut VecDeque<(State, State)>, p: (State, State)| {
        *index.entry(p).or_insert_with(|| {
            queue.push_back(p);
            g.add_state(Some(format!("({},{})", a.graph.label(p.0), b.graph.label(p.1))))
        })
    };
    let init = intern(&mut g, &mut queue, (a.initial, b.initial));
    while let Some((p, q)) = queue.pop_front() {
        let src = intern(&mut g, &mut queue, (p, q));
        if a.finals.contains(&p) && b.finals.contains(&q) {
            finals.insert(src);
        }
        for &(l1, p2) in a.graph.edges_from(p) {
            match l1 {
                None => {
                    let dst = intern(&mut g, &mut queue, (p2, q));
                    g.add_edge(src, None, dst);
                }
                Some(c) => {
                    for &(l2, q2) in b.graph.edges_from(q) {
                        if l2 == Some(c) {
                            let dst = intern(&mut g, &mut queue, (p2, q2));
                            g.add_edge(src, Some(c), dst);
                        }
                    }
                }
            }
        }
        for &(l2, q2) in b.graph.edges_from(q) {
            if l2.is_none() {
                let dst = intern(&mut g, &mut queue, (p, q2));
                g.add_edge(src, None, dst);
            }
        }
    }
    g.normalize();
    Nfa {
        graph: Arc::new(g),
        initial: init,
        finals,
    }
}

/// `(g, q, {q'})`.
pub fn with_endpoints(g: &Arc<TransitionGraph>, q: State, q2: State) -> Result<Nfa, AutomataError> {
    Nfa::new(Arc::clone(g), q, [q2])
}

/// Length-minimal, then lexicographically minimal (in alphabet order) word
/// accepted by every automaton, found by breadth-first search over the
/// implicit product. All automata must be ε-free.
pub fn shortest_witness(automata: &[Nfa], alphabet: &Alphabet) -> Option<Witness> {
    shortest_witness_bounded(automata, alphabet, usize::MAX, None).expect("unbounded search")
}

/// As [`shortest_witness`], failing with [`Exhausted`] once more than
/// `max_states` product states are visited or `deadline` passes.
pub fn shortest_witness_bounded(
    automata: &[Nfa],
    alphabet: &Alphabet,
    max_states: usize,
    deadline: Option<Instant>,
) -> Result<Option<Witness>, Exhausted> {
    debug_assert!(automata.iter().all(Nfa::is_epsilon_free));
    // Identical automata share one coordinate.
    let mut distinct: Vec<&Nfa> = Vec::new();
    for a in automata {
        if !distinct.iter().any(|d| Arc::ptr_eq(&d.graph, &a.graph) && d.initial == a.initial && d.finals == a.finals) {
            distinct.push(a);
        }
    }
    let syms = alphabet.symbols();
    // Subset construction on every coordinate: BFS order on a deterministic
    // product visits words in length-lexicographic order.
    type Node = Vec<Vec<State>>;
    let start: Node = distinct.iter().map(|a| vec![a.initial]).collect();
    let mut nodes: Vec<(Node, Option<(usize, Symbol)>)> = vec![(start.clone(), None)];
    let mut index: HashMap<Node, usize> = HashMap::from([(start, 0)]);
    let mut head = 0;
    while head < nodes.len() {
        if let Some(d) = deadline {
            if head % 256 == 0 && Instant::now() > d {
                return Err(Exhausted);
            }
        }
        let sets = nodes[head].0.clone();
        if distinct.iter().zip(&sets).all(|(a, s)| s.iter().any(|q| a.finals.contains(q))) {
            let mut word = Vec::new();
            let mut at = head;
            while let Some((parent, c)) = nodes[at].1 {
                word.push(c);
                at = parent;
            }
            word.reverse();
            let runs = automata
                .iter()
                .map(|a| a.accepting_run(&word).expect("the product accepts"))
                .collect();
            return Ok(Some(Witness { word, runs }));
        }
        'letters: for &c in syms {
            let mut next: Node = Vec::with_capacity(sets.len());
            for (a, s) in distinct.iter().zip(&sets) {
                let mut t: Vec<State> = s
                    .iter()
                    .flat_map(|&q| a.graph.edges_from(q).iter().filter(|e| e.0 == Some(c)).map(|e| e.1))
                    .collect();
                if t.is_empty() {
                    continue 'letters;
                }
                t.sort_unstable();
                t.dedup();
                next.push(t);
            }
            if !index.contains_key(&next) {
                if nodes.len() >= max_states {
                    return Err(Exhausted);
                }
                index.insert(next.clone(), nodes.len());
                nodes.push((next, Some((head, c))));
            }
        }
        head += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::word;
    use crate::regex::parse_regex;

    fn bin() -> Alphabet {
        Alphabet::from_str_symbols("01")
    }

    fn nfa(text: &str) -> Nfa {
        compile(&parse_regex(text, &bin()).unwrap(), &bin())
    }

    #[test]
    fn minimization_preserves_languages() {
        for (r, states) in [("(01)*", 2), ("0*1*0*1*", 4), ("(0+1)*(00(0+1)*+11(0+1)*)", 4), ("0+()", 2), ("0*0", 2)] {
            let a = nfa(r);
            let m = minimize(&a, &bin());
            assert!(m.is_epsilon_free());
            assert_eq!(m.num_states(), states, "{r}");
            for w in bin().words_up_to(7) {
                assert_eq!(a.accepts(&w), m.accepts(&w), "{r} on {w:?}");
            }
        }
        let empty = minimize(&Nfa::empty(), &bin());
        assert_eq!((empty.num_states(), empty.finals.len()), (1, 0));
    }

    #[test]
    fn compile_basic_languages() {
        let e = compile(&Regex::Empty, &bin());
        assert!(!e.accepts(&[]));
        let eps = compile(&Regex::Epsilon, &bin());
        assert!(eps.accepts(&[]));
        assert!(!eps.accepts(&word("0")));
        let a = nfa("(01)*");
        assert!(a.accepts(&word("0101")));
        assert!(!a.accepts(&word("010")));
        assert!(a.is_epsilon_free());
    }

    #[test]
    fn product_of_alternating_languages() {
        let p = product(&nfa("(01)*"), &nfa("(10)*"));
        for w in bin().words_up_to(6) {
            assert_eq!(p.accepts(&w), w.is_empty());
        }
    }

    #[test]
    fn witnesses() {
        let w = shortest_witness(&[nfa("(01)*"), nfa("(0+1)*101*")], &bin()).unwrap();
        assert_eq!(w.word, word("0101"));
        assert!(w.replays(&[nfa("(01)*"), nfa("(0+1)*101*")]));
        let w = shortest_witness(&[nfa("(01)*"), nfa("(10)*")], &bin()).unwrap();
        assert!(w.word.is_empty());
        assert!(shortest_witness(&[nfa("0*"), nfa("11*")], &bin()).is_none());
        let w = shortest_witness(&[], &bin()).unwrap();
        assert!(w.word.is_empty());
    }

    #[test]
    fn endpoints() {
        let g = Arc::new(TransitionGraph::from_edges(2, &[(0, Some('0'), 1)]).unwrap());
        assert!(with_endpoints(&g, 0, 0).unwrap().accepts(&[]));
        assert!(!with_endpoints(&g, 1, 0).unwrap().accepts(&[]));
        assert!(with_endpoints(&g, 0, 5).is_err());
    }

    #[test]
    fn epsilon_removal() {
        let g = Arc::new(TransitionGraph::from_edges(2, &[(0, None, 1)]).unwrap());
        let a = Nfa::new(g, 0, [1]).unwrap();
        let b = remove_epsilon(&a);
        assert!(b.is_epsilon_free());
        assert!(b.accepts(&[]));
        assert!(b.num_states() <= a.num_states());
    }

    #[test]
    fn run_counting() {
        let a = nfa("(0+1)*1(0+1)*");
        assert_eq!(a.count_accepting_runs(&word("101")), 2);
        let run = a.accepting_run(&word("101")).unwrap();
        assert_eq!(run.len(), 4);
    }
}
