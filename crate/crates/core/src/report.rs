//! Line-oriented result records.
//!
//! ```text
//! verdict: sat
//! model x = "101101"
//! stat class = single-letter
//! ```
//!
//! An optional `reason: ...` line follows the verdict. Words are quoted with
//! `\"`, `\\` and `\u{...}` escapes, so every record fits on one line.

use std::fmt;

use thiserror::Error;

use crate::alphabet::Word;
use crate::solver::{Outcome, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunReport {
    /// `sat`, `unsat`, `unsupported` or `resource-out`.
    pub verdict: String,
    pub reason: Option<String>,
    /// Visible variables in name order.
    pub model: Vec<(String, Word)>,
    /// In emission order; keys are unique.
    pub stats: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ReportError {
    pub line: usize,
    pub message: String,
}

pub fn quote(w: &[char]) -> String {
    let mut s = String::from("\"");
    for &c in w {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            c if c.is_control() || !(' '..='~').contains(&c) && !c.is_alphanumeric() => {
                s.push_str(&format!("\\u{{{:x}}}", c as u32))
            }
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

pub fn unquote(s: &str) -> Option<Word> {
    let inner = s.strip_prefix('"')?.strip_suffix('"')?;
    let mut out = Vec::new();
    let mut it = inner.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            if c == '"' {
                return None;
            }
            out.push(c);
            continue;
        }
        match it.next()? {
            '"' => out.push('"'),
            '\\' => out.push('\\'),
            'u' => {
                if it.next()? != '{' {
                    return None;
                }
                let hex: String = it.by_ref().take_while(|&c| c != '}').collect();
                out.push(char::from_u32(u32::from_str_radix(&hex, 16).ok()?)?);
            }
            _ => return None,
        }
    }
    Some(out)
}

impl RunReport {
    /// The report of a solver outcome without hidden variables. `timing`
    /// adds the wall-clock time.
    pub fn from_outcome(o: &Outcome, timing: bool) -> Self {
        let (reason, model) = match &o.verdict {
            Verdict::Sat(m) => (
                None,
                m.iter()
                    .filter(|(k, _)| !o.hidden.contains(*k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            ),
            Verdict::Unsat => (None, Vec::new()),
            Verdict::Unsupported(r) | Verdict::ResourceOut(r) => (Some(r.clone()), Vec::new()),
        };
        let c = &o.classification;
        let mut stats = vec![
            ("class".to_string(), c.class.name().to_string()),
            ("diamond-index".to_string(), c.diamond_index.to_string()),
            ("l-length".to_string(), c.l_length.to_string()),
            ("depth".to_string(), c.depth.to_string()),
            ("branches".to_string(), o.stats.branches.to_string()),
            ("max-automaton-states".to_string(), o.stats.max_automaton_states.to_string()),
            ("constraints".to_string(), o.stats.constraints.to_string()),
        ];
        if timing {
            stats.push(("time-ms".to_string(), o.stats.elapsed.as_millis().to_string()));
        }
        RunReport {
            verdict: o.verdict.kind().to_string(),
            reason,
            model,
            stats,
        }
    }

    pub fn stat(&self, key: &str) -> Option<&str> {
        self.stats.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Self, ReportError> {
        let err = |line: usize, message: &str| ReportError {
            line,
            message: message.to_string(),
        };
        let mut r = RunReport::default();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            if let Some(v) = line.strip_prefix("verdict: ") {
                if i != 0 || !["sat", "unsat", "unsupported", "resource-out"].contains(&v) {
                    return Err(err(n, "bad verdict line"));
                }
                r.verdict = v.to_string();
            } else if let Some(v) = line.strip_prefix("reason: ") {
                r.reason = Some(v.to_string());
            } else if let Some(rest) = line.strip_prefix("model ") {
                let (var, w) = rest.split_once(" = ").ok_or_else(|| err(n, "expected `model <var> = <word>`"))?;
                let w = unquote(w).ok_or_else(|| err(n, "malformed word"))?;
                r.model.push((var.to_string(), w));
            } else if let Some(rest) = line.strip_prefix("stat ") {
                let (k, v) = rest.split_once(" = ").ok_or_else(|| err(n, "expected `stat <key> = <value>`"))?;
                r.stats.push((k.to_string(), v.to_string()));
            } else {
                return Err(err(n, "unrecognized line"));
            }
        }
        if r.verdict.is_empty() {
            return Err(err(1, "missing verdict"));
        }
        Ok(r)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        if let Some(r) = &self.reason {
            writeln!(f, "reason: {r}")?;
        }
        for (v, w) in &self.model {
            writeln!(f, "model {v} = {}", quote(w))?;
        }
        for (k, v) in &self.stats {
            writeln!(f, "stat {k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_round_trips() {
        for s in ["", "01", "a\"b\\c", "x\ny", "\u{e000}q"] {
            let w: Word = s.chars().collect();
            assert_eq!(unquote(&quote(&w)), Some(w));
        }
    }

    #[test]
    fn report_round_trips() {
        let r = RunReport {
            verdict: "sat".into(),
            reason: None,
            model: vec![("x".into(), "10".chars().collect()), ("y'".into(), vec![])],
            stats: vec![("class".into(), "regex".into())],
        };
        assert_eq!(RunReport::parse(&r.to_string()).unwrap(), r);
        assert!(RunReport::parse("model x = \"0\"").is_err());
    }
}
