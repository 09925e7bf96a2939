//! Decision procedure: choose accepting states for the memberships, eliminate
//! the definitions from the last to the first, then look for one word per
//! source variable in the intersection of its constraints.
//!
//! Branches are explored depth-first in a canonical order and the first
//! successful one yields the model, so the outcome is a function of the
//! formula and the limits alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::alphabet::{show, Alphabet, Word};
use crate::automata::{compile, minimize, shortest_witness_bounded, Exhausted, Nfa, State};
use crate::elimination::{
    candidate_guesses, eliminate_vertex, satisfiable, var_nfas, BCache, Budget, ConstraintEnv, GuessTrace,
    PatternAutomaton, Step, SuccinctConstraint,
};
use crate::formula::{
    check_straight_line, classify, desugar_concat, unsupported_reason, Classification, Formula, Pattern,
    PatternShape, Rhs, Term,
};
use crate::parsing::{parsing_automaton, ParsingError};
use crate::regex::{word_regex, Regex};
use crate::semantics::replace_all;

pub type Model = BTreeMap<String, Word>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Model),
    Unsat,
    Unsupported(String),
    /// Names the exhausted budget.
    ResourceOut(String),
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unsupported(_) => "unsupported",
            Verdict::ResourceOut(_) => "resource-out",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Cap on the states of any single automaton or product search.
    pub max_product_states: usize,
    /// Cap on guess branches tried (per top-level branch in parallel mode).
    pub max_branches: usize,
    pub timeout: Option<Duration>,
    /// Length bound used when the oracle is consulted.
    pub oracle_max_len: usize,
    pub parallel: bool,
    /// Merge the accepting states of each membership through a fresh state
    /// instead of branching on them.
    pub defer_finals: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_product_states: 200_000,
            max_branches: 100_000,
            timeout: None,
            oracle_max_len: 4,
            parallel: false,
            defer_finals: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub branches: usize,
    pub max_automaton_states: usize,
    /// Most succinct constraints held by one environment.
    pub constraints: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub classification: Classification,
    pub stats: SolveStats,
    /// The guesses of the successful branch.
    pub trace: Option<GuessTrace>,
    /// Synthesized variables; present in the model, omitted from reports.
    pub hidden: BTreeSet<String>,
}

/// Failures that indicate a bug, never a property of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("extracted model fails verification: {0}")]
    Verification(String),
    #[error("formula is not straight-line: {0}")]
    NotStraightLine(String),
}

/// A concatenation-free constraint over indexed variables.
#[derive(Debug, Clone)]
pub struct Instance {
    /// Working alphabet; witnesses are drawn from it.
    pub alphabet: Alphabet,
    pub vars: Vec<String>,
    /// Steps in dependency order; elimination runs them backwards.
    pub steps: Vec<Step>,
    /// Regexes of the steps, for evaluating models.
    pub patterns: Vec<Regex>,
    pub memberships: Vec<(usize, Nfa)>,
}

impl Instance {
    pub fn var(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Variables not defined by any step.
    pub fn sources(&self) -> Vec<usize> {
        let defined: BTreeSet<usize> = self.steps.iter().map(|s| s.x).collect();
        (0..self.vars.len()).filter(|v| !defined.contains(v)).collect()
    }

    /// Environments for the choices of accepting states, in canonical order
    /// (lexicographic over memberships, states ascending).
    pub fn initial_envs(&self, defer_finals: bool) -> Vec<(Vec<(usize, State)>, ConstraintEnv)> {
        let base = || ConstraintEnv {
            constraints: vec![Vec::new(); self.vars.len()],
            eliminated: BTreeSet::new(),
        };
        if defer_finals {
            let mut env = base();
            for (v, a) in &self.memberships {
                let mut g = (*a.graph).clone();
                let f = g.add_state(Some("final".into()));
                for &q in &a.finals {
                    g.add_edge(q, None, f);
                }
                g.normalize();
                env.constraints[*v].push(SuccinctConstraint {
                    graph: Arc::new(g),
                    pairs: [(a.initial, f)].into(),
                });
            }
            return vec![(Vec::new(), env)];
        }
        let mut out = vec![(Vec::new(), base())];
        for (i, (v, a)) in self.memberships.iter().enumerate() {
            let mut next = Vec::new();
            for (picks, env) in &out {
                for &f in &a.finals {
                    let mut picks: Vec<(usize, State)> = picks.clone();
                    picks.push((i, f));
                    let mut env = env.clone();
                    env.constraints[*v].push(SuccinctConstraint {
                        graph: Arc::clone(&a.graph),
                        pairs: [(a.initial, f)].into(),
                    });
                    next.push((picks, env));
                }
            }
            out = next;
        }
        out
    }

    /// Values of the defined variables, given the sources.
    pub fn evaluate(&self, sources: &BTreeMap<usize, Word>) -> Vec<Word> {
        let mut val: Vec<Option<Word>> = vec![None; self.vars.len()];
        for (&v, w) in sources {
            val[v] = Some(w.clone());
        }
        for (s, e) in self.steps.iter().zip(&self.patterns) {
            let y = val[s.y].clone().unwrap_or_default();
            let z = val[s.z].clone().unwrap_or_default();
            val[s.x] = Some(replace_all(&y, e, &z));
        }
        val.into_iter().map(Option::unwrap_or_default).collect()
    }

    /// The first violated conjunct of the instance, if any.
    pub fn check(&self, values: &[Word]) -> Result<(), String> {
        for (s, e) in self.steps.iter().zip(&self.patterns) {
            if replace_all(&values[s.y], e, &values[s.z]) != values[s.x] {
                return Err(format!("definition of {}", self.vars[s.x]));
            }
        }
        for (v, a) in &self.memberships {
            if !a.accepts(&values[*v]) {
                return Err(format!("membership of {}", self.vars[*v]));
            }
        }
        Ok(())
    }

    /// Replays a fixed trace. `Ok(None)` when the trace does not lead to a
    /// model (an empty intersection); the model covers every variable.
    pub fn replay(&self, trace: &GuessTrace, budget: &Budget) -> Result<Option<Vec<Word>>, Exhausted> {
        let mut env = ConstraintEnv {
            constraints: vec![Vec::new(); self.vars.len()],
            eliminated: BTreeSet::new(),
        };
        for &(i, f) in &trace.finals {
            let (v, a) = &self.memberships[i];
            env.constraints[*v].push(SuccinctConstraint {
                graph: Arc::clone(&a.graph),
                pairs: [(a.initial, f)].into(),
            });
        }
        let cache = BCache::default();
        for (name, guesses) in &trace.steps {
            let step = self
                .steps
                .iter()
                .find(|s| &self.vars[s.x] == name)
                .expect("trace names a defined variable");
            env = eliminate_vertex(&env, step, guesses, budget, &cache)?;
        }
        self.step_two(&env, budget)
    }

    /// Step II: one shortest witness per source, smallest products first.
    fn step_two(&self, env: &ConstraintEnv, budget: &Budget) -> Result<Option<Vec<Word>>, Exhausted> {
        let mut sources = self.sources();
        let size = |v: usize| -> usize { env.constraints[v].iter().map(|c| c.graph.num_states() * c.pairs.len()).sum() };
        sources.sort_by_key(|&v| (size(v), v));
        let mut vals = BTreeMap::new();
        for v in sources {
            let nfas = var_nfas(env, v);
            match shortest_witness_bounded(&nfas, &self.alphabet, budget.max_states, budget.deadline)? {
                Some(w) => {
                    vals.insert(v, w.word);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(self.evaluate(&vals)))
    }
}

/// Compiles the pattern of a step; single letters need no parsing automaton.
fn pattern_automaton(e: &Regex, alphabet: &Alphabet, limit: usize) -> Result<PatternAutomaton, ParsingError> {
    Ok(match crate::formula::shape_of(e) {
        PatternShape::Letter(a) => PatternAutomaton::Letter(a),
        _ => PatternAutomaton::Parser(Arc::new(parsing_automaton(e, alphabet, limit)?)),
    })
}

/// Builds the instance of a supported, concatenation-free formula: every
/// constant argument becomes a hidden variable with a singleton membership.
/// `user_only` lists variables restricted to the declared alphabet.
pub fn instance_of(f: &Formula, user_only: &[String], limits: &SearchLimits) -> Result<Instance, InstanceError> {
    let order = check_straight_line(f).map_err(|e| InstanceError::NotStraightLine(e.to_string()))?;
    let mut inst = Instance {
        alphabet: f.alphabet.clone(),
        vars: f.variables(),
        steps: Vec::new(),
        patterns: Vec::new(),
        memberships: Vec::new(),
    };
    let mut constants = 0usize;
    let mut term = |t: &Term, inst: &mut Instance| -> usize {
        match t {
            Term::Var(v) => inst.var(v).expect("variable listed"),
            Term::Const(w) => {
                let mut name = format!("{:?}@{constants}", show(w));
                while inst.vars.contains(&name) {
                    name.push('#');
                }
                constants += 1;
                inst.vars.push(name);
                let v = inst.vars.len() - 1;
                inst.memberships.push((v, Nfa::singleton(w)));
                v
            }
        }
    };
    for i in order {
        let d = &f.definitions[i];
        let Rhs::ReplaceAll {
            subject,
            pattern,
            replacement,
        } = &d.rhs
        else {
            panic!("instance_of needs a concatenation-free formula");
        };
        let e = match pattern {
            Pattern::Var(_) => panic!("instance_of needs constant patterns"),
            p => p.to_regex().unwrap(),
        };
        let y = term(subject, &mut inst);
        let z = term(replacement, &mut inst);
        let pa = pattern_automaton(&e, &f.alphabet, limits.max_product_states).map_err(|err| match err {
            ParsingError::Exhausted => InstanceError::Exhausted,
            ParsingError::Precondition(m) => InstanceError::Pattern(m.to_string()),
        })?;
        inst.steps.push(Step {
            def: inst.steps.len(),
            x: inst.var(&d.var).unwrap(),
            y,
            z,
            pattern: pa,
        });
        inst.patterns.push(e);
    }
    for m in &f.memberships {
        let v = inst.var(&m.var).unwrap();
        inst.memberships.push((v, minimize(&compile(&m.regex, &f.alphabet), &f.alphabet)));
    }
    if f.alphabet != f.user_alphabet {
        let sigma = Nfa::universal(&f.user_alphabet);
        for v in user_only {
            if let Some(i) = inst.var(v) {
                inst.memberships.push((i, sigma.clone()));
            }
        }
    }
    Ok(inst)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("{0}")]
    NotStraightLine(String),
    #[error("parsing automaton exceeds the state budget")]
    Exhausted,
    #[error("{0}")]
    Pattern(String),
}

enum Stop {
    Exhausted,
    Branches,
}

impl From<Exhausted> for Stop {
    fn from(_: Exhausted) -> Self {
        Stop::Exhausted
    }
}

struct Search<'a> {
    inst: &'a Instance,
    budget: &'a Budget,
    cache: &'a BCache,
    branches: AtomicUsize,
    max_branches: usize,
    peak_constraints: AtomicUsize,
}

type Found = (Vec<Word>, GuessTrace);

impl Search<'_> {
    /// Depth-first over the guesses of step `k` of the elimination order.
    fn dfs(&self, env: &ConstraintEnv, k: usize, trace: &mut GuessTrace) -> Result<Option<Found>, Stop> {
        self.budget.check_time()?;
        self.peak_constraints.fetch_max(env.total(), Ordering::Relaxed);
        let n = self.inst.steps.len();
        if k == n {
            return Ok(self.inst.step_two(env, self.budget)?.map(|vals| (vals, trace.clone())));
        }
        let step = &self.inst.steps[n - 1 - k];
        let guesses = candidate_guesses(env, step, &self.inst.alphabet, self.budget)?;
        for g in guesses {
            if self.branches.fetch_add(1, Ordering::Relaxed) >= self.max_branches {
                return Err(Stop::Branches);
            }
            let next = eliminate_vertex(env, step, &g, self.budget, self.cache)?;
            // The subject and replacement must stay satisfiable on their own.
            if !satisfiable(&next, step.y, &self.inst.alphabet, self.budget)?
                || !satisfiable(&next, step.z, &self.inst.alphabet, self.budget)?
            {
                continue;
            }
            trace.steps.push((self.inst.vars[step.x].clone(), g));
            if let Some(found) = self.dfs(&next, k + 1, trace)? {
                return Ok(Some(found));
            }
            trace.steps.pop();
        }
        Ok(None)
    }

    fn root(&self, picks: &[(usize, State)], env: &ConstraintEnv) -> Result<Option<Found>, Stop> {
        for v in 0..self.inst.vars.len() {
            if env.constraints[v].len() > 1 && !satisfiable(env, v, &self.inst.alphabet, self.budget)? {
                return Ok(None);
            }
            if env.constraints[v].iter().any(|c| c.nfas().iter().any(|a| a.trim().finals.is_empty())) {
                return Ok(None);
            }
        }
        let mut trace = GuessTrace {
            finals: picks.to_vec(),
            steps: Vec::new(),
        };
        self.dfs(env, 0, &mut trace)
    }
}

/// Runs the search on an instance. The values cover every variable.
pub fn search(inst: &Instance, limits: &SearchLimits, stats: &mut SolveStats) -> Result<Option<Found>, String> {
    let deadline = limits.timeout.map(|t| Instant::now() + t);
    let budget = Budget::new(limits.max_product_states, deadline);
    let cache = BCache::default();
    let roots = inst.initial_envs(limits.defer_finals);
    let make = || Search {
        inst,
        budget: &budget,
        cache: &cache,
        branches: AtomicUsize::new(0),
        max_branches: limits.max_branches,
        peak_constraints: AtomicUsize::new(0),
    };
    let describe = |s: Stop| match s {
        Stop::Exhausted if deadline.is_some_and(|d| Instant::now() > d) => "timeout".to_string(),
        Stop::Exhausted => "max-product-states".to_string(),
        Stop::Branches => "max-branches".to_string(),
    };
    let result = if limits.parallel {
        let searches: Vec<Search> = roots.iter().map(|_| make()).collect();
        let r = roots
            .par_iter()
            .zip(searches.par_iter())
            .map(|((picks, env), s)| s.root(picks, env))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        stats.branches = searches.iter().map(|s| s.branches.load(Ordering::Relaxed)).sum();
        stats.constraints = searches
            .iter()
            .map(|s| s.peak_constraints.load(Ordering::Relaxed))
            .max()
            .unwrap_or(0);
        r.unwrap_or(Ok(None))
    } else {
        let s = make();
        let mut r = Ok(None);
        for (picks, env) in &roots {
            r = s.root(picks, env);
            if !matches!(r, Ok(None)) {
                break;
            }
        }
        stats.branches = s.branches.load(Ordering::Relaxed);
        stats.constraints = s.peak_constraints.load(Ordering::Relaxed);
        r
    };
    stats.max_automaton_states = budget.peak_states.load(Ordering::Relaxed);
    result.map_err(describe)
}

/// Checks every definition (by the evaluator) and membership of `f`. The
/// error names the first violated conjunct.
pub fn verify_model(f: &Formula, model: &Model) -> Result<(), String> {
    let get = |v: &str| model.get(v).ok_or_else(|| format!("unassigned variable {v}"));
    let term = |t: &Term| -> Result<Word, String> {
        match t {
            Term::Var(v) => get(v).cloned(),
            Term::Const(w) => Ok(w.clone()),
        }
    };
    for d in &f.definitions {
        let x = get(&d.var)?;
        let value = match &d.rhs {
            Rhs::ReplaceAll {
                subject,
                pattern,
                replacement,
            } => {
                let e = match pattern {
                    Pattern::Var(p) => word_regex(get(p)?),
                    p => p.to_regex().unwrap(),
                };
                replace_all(&term(subject)?, &e, &term(replacement)?)
            }
            Rhs::Concat(a, b) => [term(a)?, term(b)?].concat(),
        };
        if &value != x {
            return Err(format!("definition of {} (line {})", d.var, d.line));
        }
    }
    for m in &f.memberships {
        if !m.regex.matches(get(&m.var)?) {
            return Err(format!("membership {} in /{}/", m.var, m.regex));
        }
    }
    for v in f.variables() {
        let w = get(&v)?;
        if let Some(&c) = w.iter().find(|&&c| !f.user_alphabet.contains(c)) {
            return Err(format!("{v} uses {c:?}, outside the alphabet"));
        }
    }
    Ok(())
}

/// Full pipeline with statistics and the successful trace.
pub fn solve_detailed(f: &Formula, limits: &SearchLimits) -> Result<Outcome, SolverError> {
    let start = Instant::now();
    check_straight_line(f).map_err(|e| SolverError::NotStraightLine(e.to_string()))?;
    let classification = classify(f);
    let mut stats = SolveStats::default();
    let finish = |verdict, stats: SolveStats, trace| {
        Ok(Outcome {
            verdict,
            classification: classification.clone(),
            stats: SolveStats {
                elapsed: start.elapsed(),
                ..stats
            },
            trace,
            hidden: f.hidden.clone(),
        })
    };
    if let Some(reason) = unsupported_reason(f) {
        return finish(Verdict::Unsupported(reason.to_string()), stats, None);
    }
    let d = desugar_concat(f).formula;
    let user_only = if d.alphabet != d.user_alphabet { f.source_vars() } else { Vec::new() };
    let inst = match instance_of(&d, &user_only, limits) {
        Ok(i) => i,
        Err(InstanceError::Exhausted) => return finish(Verdict::ResourceOut("max-product-states".into()), stats, None),
        Err(e) => return Err(SolverError::NotStraightLine(e.to_string())),
    };
    match search(&inst, limits, &mut stats) {
        Err(budget) => finish(Verdict::ResourceOut(budget), stats, None),
        Ok(None) => finish(Verdict::Unsat, stats, None),
        Ok(Some((values, trace))) => {
            inst.check(&values).map_err(SolverError::Verification)?;
            let model: Model = f
                .variables()
                .into_iter()
                .map(|v| {
                    let w = values[inst.var(&v).unwrap()].clone();
                    (v, w)
                })
                .collect();
            verify_model(f, &model).map_err(SolverError::Verification)?;
            finish(Verdict::Sat(model), stats, Some(trace))
        }
    }
}

/// Decides `f`.
///
/// # Panics
/// If an extracted model fails verification, which indicates a bug.
pub fn solve(f: &Formula, limits: &SearchLimits) -> Verdict {
    match solve_detailed(f, limits) {
        Ok(o) => o.verdict,
        Err(e) => panic!("internal error: {e}"),
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sat(m) => {
                write!(f, "sat")?;
                for (v, w) in m {
                    write!(f, " {v}={:?}", show(w))?;
                }
                Ok(())
            }
            Verdict::Unsat => write!(f, "unsat"),
            Verdict::Unsupported(r) => write!(f, "unsupported: {r}"),
            Verdict::ResourceOut(b) => write!(f, "resource-out: {b}"),
        }
    }
}
