//! Leftmost-longest `replaceall` semantics.
//!
//! Two independent evaluators are provided: [`replace_all`] scans with a
//! compiled automaton, [`replace_all_reference`] follows the recursive
//! definition literally using AST matching. They are cross-checked in tests.

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{compile, Nfa};
use crate::regex::Regex;

/// A factor `subject[start .. start + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchSpan {
    pub start: usize,
    pub len: usize,
}

impl MatchSpan {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Gap { start: usize, len: usize },
    Match(MatchSpan),
}

/// Gaps and matches covering the subject from left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub segments: Vec<Segment>,
}

impl Decomposition {
    pub fn spans(&self) -> Vec<MatchSpan> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Match(m) => Some(*m),
                Segment::Gap { .. } => None,
            })
            .collect()
    }

    /// Replaces every match by `w`.
    pub fn splice(&self, subject: &[Symbol], w: &[Symbol]) -> Word {
        let mut out = Vec::new();
        for s in &self.segments {
            match *s {
                Segment::Gap { start, len } => out.extend_from_slice(&subject[start..start + len]),
                Segment::Match(_) => out.extend_from_slice(w),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("pattern `{0}` matches the empty word; decompositions with gaps are undefined")]
    NullablePattern(String),
}

/// A compiled pattern.
#[derive(Debug, Clone)]
pub struct Matcher {
    nfa: Nfa,
    nullable: bool,
}

impl Matcher {
    pub fn new(e: &Regex) -> Self {
        let alphabet = Alphabet::new(e.symbols());
        let nfa = compile(e, &alphabet);
        let nullable = nfa.finals.contains(&nfa.initial);
        Matcher { nfa, nullable }
    }

    pub fn nullable(&self) -> bool {
        self.nullable
    }

    /// Length of the longest match starting at `pos`, if any.
    pub fn longest_at(&self, u: &[Symbol], pos: usize) -> Option<usize> {
        let g = &self.nfa.graph;
        let mut cur: std::collections::BTreeSet<usize> = [self.nfa.initial].into();
        let mut best = if self.nullable { Some(0) } else { None };
        for (i, &c) in u.iter().enumerate().skip(pos) {
            cur = g.step(&cur, c);
            if cur.is_empty() {
                break;
            }
            if cur.iter().any(|q| self.nfa.finals.contains(q)) {
                best = Some(i + 1 - pos);
            }
        }
        best
    }

    /// Leftmost-longest match in `u[from..]`, positions relative to `u`.
    /// A nullable pattern always matches at `from`.
    pub fn leftmost_longest_from(&self, u: &[Symbol], from: usize) -> Option<MatchSpan> {
        if self.nullable {
            return self.longest_at(u, from).map(|len| MatchSpan { start: from, len });
        }
        (from..=u.len()).find_map(|s| self.longest_at(u, s).map(|len| MatchSpan { start: s, len }))
    }

    /// The matches replaced by `replaceall`, left to right.
    ///
    /// Non-nullable pattern: iterated leftmost-longest matches, each search
    /// resuming at the end of the previous match. Nullable pattern: a match at
    /// every boundary, each followed by one copied letter unless it reaches the end.
    pub fn spans(&self, u: &[Symbol]) -> Vec<MatchSpan> {
        let mut out = Vec::new();
        let mut pos = 0;
        if self.nullable {
            loop {
                let len = self.longest_at(u, pos).expect("nullable pattern matches");
                out.push(MatchSpan { start: pos, len });
                if pos + len == u.len() {
                    break;
                }
                pos += len + 1;
            }
        } else {
            while let Some(m) = self.leftmost_longest_from(u, pos) {
                out.push(m);
                pos = m.end();
            }
        }
        out
    }

    pub fn replace_all(&self, u: &[Symbol], v: &[Symbol]) -> Word {
        splice(u, &self.spans(u), v)
    }
}

/// Copies `u` with each span replaced by `w`. Spans must be ordered and disjoint.
pub fn splice(u: &[Symbol], spans: &[MatchSpan], w: &[Symbol]) -> Word {
    let mut out = Vec::with_capacity(u.len());
    let mut prev = 0;
    for m in spans {
        out.extend_from_slice(&u[prev..m.start]);
        out.extend_from_slice(w);
        prev = m.end();
    }
    out.extend_from_slice(&u[prev..]);
    out
}

pub fn leftmost_longest_match(v: &[Symbol], e: &Regex) -> Option<MatchSpan> {
    Matcher::new(e).leftmost_longest_from(v, 0)
}

pub fn replace_all(u: &[Symbol], e: &Regex, v: &[Symbol]) -> Word {
    Matcher::new(e).replace_all(u, v)
}

/// Iterated leftmost-longest decomposition; the pattern must not match ε.
pub fn match_decomposition(v: &[Symbol], e: &Regex) -> Result<Decomposition, SemanticsError> {
    let m = Matcher::new(e);
    if m.nullable() {
        return Err(SemanticsError::NullablePattern(e.to_string()));
    }
    let mut segments = Vec::new();
    let mut prev = 0;
    for span in m.spans(v) {
        if span.start > prev {
            segments.push(Segment::Gap {
                start: prev,
                len: span.start - prev,
            });
        }
        segments.push(Segment::Match(span));
        prev = span.end();
    }
    if prev < v.len() {
        segments.push(Segment::Gap {
            start: prev,
            len: v.len() - prev,
        });
    }
    Ok(Decomposition { segments })
}

/// Leftmost-longest match by exhaustive factor testing against the AST.
fn reference_match(u: &[Symbol], e: &Regex) -> Option<MatchSpan> {
    let last_start = if e.nullable() { 0 } else { u.len() };
    (0..=last_start).find_map(|i| {
        (i..=u.len())
            .rev()
            .find(|&j| e.matches(&u[i..j]))
            .map(|j| MatchSpan { start: i, len: j - i })
    })
}

/// The recursive definition of `replaceall`, transcribed case by case.
pub fn replace_all_reference(u: &[Symbol], e: &Regex, v: &[Symbol]) -> Word {
    let Some(m) = reference_match(u, e) else {
        return u.to_vec();
    };
    let mut out = Vec::new();
    if e.nullable() {
        debug_assert_eq!(m.start, 0);
        out.extend_from_slice(v);
        if m.len < u.len() {
            out.push(u[m.len]);
            out.extend(replace_all_reference(&u[m.len + 1..], e, v));
        }
    } else {
        out.extend_from_slice(&u[..m.start]);
        out.extend_from_slice(v);
        out.extend(replace_all_reference(&u[m.end()..], e, v));
    }
    out
}
