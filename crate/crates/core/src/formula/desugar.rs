use super::{Definition, Formula, Pattern, Rhs, Term};
use crate::alphabet::Symbol;

/// Result of [`desugar_concat`].
#[derive(Debug, Clone)]
pub struct Desugared {
    pub formula: Formula,
    /// The two fresh letters `(a, b)`, when any concatenation was rewritten.
    pub fresh: Option<(Symbol, Symbol)>,
}

/// Rewrites every `x := s1 . s2` into
/// `x# := replaceall("ab", "a", s1); x := replaceall(x#, "b", s2)`
/// with `a`, `b` fresh. One pair of fresh letters serves all definitions:
/// they only ever occur in the synthesized subjects.
pub fn desugar_concat(f: &Formula) -> Desugared {
    if !f.has_concat() {
        return Desugared {
            formula: f.clone(),
            fresh: None,
        };
    }
    let mut out = f.clone();
    let a = f.alphabet.fresh_symbol(&[]);
    let b = f.alphabet.fresh_symbol(&[a]);
    out.alphabet.insert(a);
    out.alphabet.insert(b);
    out.definitions.clear();
    let taken = f.variables();
    for d in &f.definitions {
        match &d.rhs {
            Rhs::Concat(s1, s2) => {
                let mut aux = format!("{}#pre", d.var);
                while taken.contains(&aux) {
                    aux.push('#');
                }
                out.hidden.insert(aux.clone());
                out.definitions.push(Definition {
                    var: aux.clone(),
                    rhs: Rhs::ReplaceAll {
                        subject: Term::Const(vec![a, b]),
                        pattern: Pattern::Const(vec![a]),
                        replacement: s1.clone(),
                    },
                    line: d.line,
                });
                out.definitions.push(Definition {
                    var: d.var.clone(),
                    rhs: Rhs::ReplaceAll {
                        subject: Term::Var(aux),
                        pattern: Pattern::Const(vec![b]),
                        replacement: s2.clone(),
                    },
                    line: d.line,
                });
            }
            Rhs::ReplaceAll { .. } => out.definitions.push(d.clone()),
        }
    }
    Desugared {
        formula: out,
        fresh: Some((a, b)),
    }
}
