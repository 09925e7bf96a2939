//! Bounded brute force: try every assignment of short words to the source
//! variables and evaluate the rest directly. Independent of the elimination.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::alphabet::Word;
use crate::formula::{Formula, Pattern, Rhs, Term};
use crate::semantics::replace_all;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    /// The first satisfying assignment in enumeration order, over all variables.
    SatWitness(BTreeMap<String, Word>),
    NoWitnessUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the oracle does not handle variable patterns or extension atoms")]
    Unsupported,
    #[error("{0}")]
    NotStraightLine(String),
}

/// Enumerates tuples of source values, each of length at most `max_len`, in
/// order: the first source is most significant, and each coordinate runs
/// through its words in length-lexicographic order of the declared alphabet.
pub fn brute_force_sat(f: &Formula, max_len: usize) -> Result<OracleResult, OracleError> {
    if !f.extensions.is_empty()
        || f.definitions.iter().any(|d| matches!(d.rhs, Rhs::ReplaceAll { pattern: Pattern::Var(_), .. }))
    {
        return Err(OracleError::Unsupported);
    }
    let order = crate::formula::check_straight_line(f).map_err(|e| OracleError::NotStraightLine(e.to_string()))?;
    let sources = f.source_vars();
    let words = f.user_alphabet.words_up_to(max_len);
    // Candidates per source, already filtered by its own memberships.
    let candidates: Vec<Vec<&Word>> = sources
        .iter()
        .map(|v| words.iter().filter(|w| f.memberships_of(v).all(|r| r.matches(w))).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(OracleResult::NoWitnessUpTo(max_len));
    }
    let patterns: Vec<_> = order
        .iter()
        .map(|&i| match &f.definitions[i].rhs {
            Rhs::ReplaceAll { pattern, .. } => pattern.to_regex(),
            Rhs::Concat(..) => None,
        })
        .collect();
    let mut idx = vec![0usize; sources.len()];
    loop {
        let mut val: BTreeMap<String, Word> = sources
            .iter()
            .zip(&idx)
            .zip(&candidates)
            .map(|((v, &i), c)| (v.clone(), c[i].clone()))
            .collect();
        let term = |t: &Term, val: &BTreeMap<String, Word>| match t {
            Term::Var(v) => val[v].clone(),
            Term::Const(w) => w.clone(),
        };
        for (&i, e) in order.iter().zip(&patterns) {
            let d = &f.definitions[i];
            let w = match &d.rhs {
                Rhs::ReplaceAll { subject, replacement, .. } => {
                    replace_all(&term(subject, &val), e.as_ref().unwrap(), &term(replacement, &val))
                }
                Rhs::Concat(a, b) => [term(a, &val), term(b, &val)].concat(),
            };
            val.insert(d.var.clone(), w);
        }
        if f.memberships.iter().all(|m| m.regex.matches(&val[&m.var])) {
            return Ok(OracleResult::SatWitness(val));
        }
        // Odometer: the last source varies fastest.
        let mut k = sources.len();
        loop {
            if k == 0 {
                return Ok(OracleResult::NoWitnessUpTo(max_len));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
