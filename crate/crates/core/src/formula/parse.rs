//! Parser for the constraint language.
//!
//! ```text
//! alphabet "01";
//! var x, y, z;                          # optional; enables undeclared-variable errors
//! x := replaceall(y, /0*1/, z);         # pattern: /regex/, "word" or a variable
//! w := x . "01" . y;                    # concatenation chains
//! assert x in /(01)*/;
//! assert len(x) = len(y);               # parsed, never solved
//! assert x[1] = y[2];
//! assert t <= indexof(x, y);
//! ```
//!
//! Statements end at `;` or a newline. `#` starts a comment.

use std::collections::{BTreeSet, HashSet};

use super::{Definition, Extension, ExtensionKind, Formula, FormulaError, Membership, Pattern, Rhs, Term, Var};
use crate::alphabet::Word;
use crate::regex::parse_regex;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(Word),
    Regex(String),
    Int(u64),
    Punct(&'static str),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    start: usize,
    end: usize,
}

const PUNCT: &[&str] = &[":=", "<=", ">=", "(", ")", ",", ".", "=", "<", ">", "[", "]", ";"];

fn syntax(line: usize, col: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, FormulaError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    let byte = |i: usize| chars.get(i).map(|c| c.0).unwrap_or(text.len());
    while i < chars.len() {
        let (b, c) = chars[i];
        let col = i - line_start + 1;
        if c == '\n' {
            toks.push(Token {
                tok: Tok::Punct(";"),
                line,
                col,
                start: b,
                end: b + 1,
            });
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c == '"' {
            i += 1;
            let mut w = Vec::new();
            loop {
                match chars.get(i).map(|c| c.1) {
                    None | Some('\n') => return Err(syntax(line, col, "unterminated string")),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        let e = chars
                            .get(i + 1)
                            .map(|c| c.1)
                            .ok_or_else(|| syntax(line, col, "unterminated string"))?;
                        w.push(e);
                        i += 2;
                    }
                    Some(ch) => {
                        w.push(ch);
                        i += 1;
                    }
                }
            }
            Tok::Str(w)
        } else if c == '/' {
            i += 1;
            let mut body = String::new();
            loop {
                match chars.get(i).map(|c| c.1) {
                    None | Some('\n') => return Err(syntax(line, col, "unterminated regular expression")),
                    Some('/') => {
                        i += 1;
                        break;
                    }
                    Some('\\') if chars.get(i + 1).map(|c| c.1) == Some('/') => {
                        body.push('/');
                        i += 2;
                    }
                    Some('\\') => {
                        body.push('\\');
                        if let Some(&(_, e)) = chars.get(i + 1) {
                            body.push(e);
                        }
                        i += 2;
                    }
                    Some(ch) => {
                        body.push(ch);
                        i += 1;
                    }
                }
            }
            Tok::Regex(body)
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s = &text[b..byte(i)];
            Tok::Int(s.parse().map_err(|_| syntax(line, col, "integer too large"))?)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            Tok::Ident(text[b..byte(i)].to_string())
        } else if let Some(p) = PUNCT.iter().find(|p| text[b..].starts_with(**p)) {
            i += p.chars().count();
            Tok::Punct(p)
        } else {
            return Err(syntax(line, col, format!("unexpected character `{}`", c)));
        };
        toks.push(Token {
            tok,
            line,
            col: start - line_start + 1,
            start: b,
            end: byte(i),
        });
    }
    toks.push(Token {
        tok: Tok::End,
        line,
        col: chars.len() - line_start + 1,
        start: text.len(),
        end: text.len(),
    });
    Ok(toks)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
    f: Formula,
    declared: Option<BTreeSet<Var>>,
    uses: Vec<(Var, usize)>,
    defined: HashSet<Var>,
    chain_counter: usize,
}

/// Parses the constraint language into a [`Formula`].
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
        f: Formula::default(),
        declared: None,
        uses: Vec::new(),
        defined: HashSet::new(),
        chain_counter: 0,
    };
    loop {
        while p.peek() == &Tok::Punct(";") {
            p.pos += 1;
        }
        if p.peek() == &Tok::End {
            break;
        }
        p.statement()?;
        match p.peek() {
            Tok::Punct(";") | Tok::End => {}
            _ => return Err(p.error("expected `;` or end of line")),
        }
    }
    if let Some(declared) = &p.declared {
        for (v, line) in &p.uses {
            if !declared.contains(v) {
                return Err(FormulaError::Undeclared {
                    var: v.clone(),
                    line: *line,
                });
            }
        }
    }
    Ok(p.f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn cur(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn error(&self, message: impl Into<String>) -> FormulaError {
        let t = self.cur();
        syntax(t.line, t.col, message)
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, p: &'static str) -> Result<(), FormulaError> {
        if self.peek() == &Tok::Punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", p)))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    fn use_var(&mut self, v: &str, line: usize) {
        self.uses.push((v.to_string(), line));
    }

    fn check_word(&self, w: &[char], tok: &Token) -> Result<(), FormulaError> {
        self.require_alphabet(tok)?;
        match w.iter().find(|c| !self.f.alphabet.contains(**c)) {
            Some(c) => Err(syntax(tok.line, tok.col, format!("symbol `{}` is not in the alphabet", c))),
            None => Ok(()),
        }
    }

    fn require_alphabet(&self, tok: &Token) -> Result<(), FormulaError> {
        if self.f.alphabet.is_empty() {
            Err(syntax(tok.line, tok.col, "the alphabet must be declared before use"))
        } else {
            Ok(())
        }
    }

    fn statement(&mut self) -> Result<(), FormulaError> {
        let first = self.cur().clone();
        match &first.tok {
            Tok::Ident(k) if k == "alphabet" => {
                self.pos += 1;
                match self.next().tok {
                    Tok::Str(w) => {
                        for c in w {
                            self.f.alphabet.insert(c);
                            self.f.user_alphabet.insert(c);
                        }
                        Ok(())
                    }
                    _ => Err(syntax(first.line, first.col, "expected a quoted alphabet")),
                }
            }
            Tok::Ident(k) if k == "var" => {
                self.pos += 1;
                let mut names = vec![self.ident()?];
                while self.peek() == &Tok::Punct(",") {
                    self.pos += 1;
                    names.push(self.ident()?);
                }
                self.declared.get_or_insert_with(BTreeSet::new).extend(names);
                Ok(())
            }
            Tok::Ident(k) if k == "assert" => {
                self.pos += 1;
                self.assertion(first.line)
            }
            Tok::Ident(_) => self.definition(),
            _ => Err(self.error("expected a statement")),
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        let t = self.cur().clone();
        match t.tok.clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                self.use_var(&s, t.line);
                Ok(Term::Var(s))
            }
            Tok::Str(w) => {
                self.pos += 1;
                self.check_word(&w, &t)?;
                Ok(Term::Const(w))
            }
            _ => Err(self.error("expected a variable or a quoted string")),
        }
    }

    fn regex_token(&mut self, body: &str, t: &Token) -> Result<crate::regex::Regex, FormulaError> {
        self.require_alphabet(t)?;
        parse_regex(body, &self.f.alphabet).map_err(|e| {
            let col = t.col + 1 + e.position().unwrap_or(0);
            syntax(t.line, col, e.to_string())
        })
    }

    fn definition(&mut self) -> Result<(), FormulaError> {
        let head = self.cur().clone();
        let x = self.ident()?;
        self.expect(":=")?;
        if self.defined.contains(&x) {
            return Err(FormulaError::DuplicateDefinition { var: x, line: head.line });
        }
        self.use_var(&x, head.line);
        if matches!(self.peek(), Tok::Ident(k) if k == "replaceall") && self.toks[self.pos + 1].tok == Tok::Punct("(") {
            self.pos += 2;
            let subject = self.term()?;
            self.expect(",")?;
            let pt = self.cur().clone();
            let pattern = match pt.tok.clone() {
                Tok::Str(w) => {
                    self.pos += 1;
                    self.check_word(&w, &pt)?;
                    Pattern::Const(w)
                }
                Tok::Regex(body) => {
                    self.pos += 1;
                    Pattern::Regex(self.regex_token(&body, &pt)?)
                }
                Tok::Ident(s) => {
                    self.pos += 1;
                    self.use_var(&s, pt.line);
                    Pattern::Var(s)
                }
                _ => return Err(self.error("expected a pattern")),
            };
            self.expect(",")?;
            let replacement = self.term()?;
            self.expect(")")?;
            self.push_def(
                x,
                Rhs::ReplaceAll {
                    subject,
                    pattern,
                    replacement,
                },
                head.line,
            );
            return Ok(());
        }
        let mut terms = vec![self.term()?];
        while self.peek() == &Tok::Punct(".") {
            self.pos += 1;
            terms.push(self.term()?);
        }
        if terms.len() < 2 {
            return Err(self.error("expected `replaceall(...)` or a concatenation `a . b`"));
        }
        let mut acc = terms[0].clone();
        for (k, t) in terms.iter().enumerate().skip(1) {
            if k + 1 == terms.len() {
                self.push_def(x.clone(), Rhs::Concat(acc.clone(), t.clone()), head.line);
            } else {
                self.chain_counter += 1;
                let tmp = format!("{}#{}", x, self.chain_counter);
                self.f.hidden.insert(tmp.clone());
                self.push_def(tmp.clone(), Rhs::Concat(acc, t.clone()), head.line);
                acc = Term::Var(tmp);
            }
        }
        Ok(())
    }

    fn push_def(&mut self, var: Var, rhs: Rhs, line: usize) {
        self.defined.insert(var.clone());
        self.f.definitions.push(Definition { var, rhs, line });
    }

    fn assertion(&mut self, line: usize) -> Result<(), FormulaError> {
        let start_tok = self.cur().clone();
        let ahead = |k: usize| self.toks.get(self.pos + k).map(|t| t.tok.clone());
        // x in /re/
        if let (Some(Tok::Ident(x)), Some(Tok::Ident(kw))) = (ahead(0), ahead(1)) {
            if kw == "in" {
                self.pos += 2;
                self.use_var(&x, line);
                let rt = self.cur().clone();
                let Tok::Regex(body) = rt.tok.clone() else {
                    return Err(self.error("expected a regular expression `/.../`"));
                };
                self.pos += 1;
                let regex = self.regex_token(&body, &rt)?;
                self.f.memberships.push(Membership { var: x, regex });
                return Ok(());
            }
        }
        // Extension atoms: consume to the end of the statement, then classify.
        let mut toks = Vec::new();
        while !matches!(self.peek(), Tok::Punct(";") | Tok::End) {
            toks.push(self.next());
        }
        let end = toks.last().map(|t| t.end).unwrap_or(start_tok.start);
        let text = self.text[start_tok.start..end].trim().to_string();
        let is = |t: &Token, s: &str| matches!(&t.tok, Tok::Ident(k) if k == s);
        let kind = if toks.iter().any(|t| is(t, "len")) {
            ExtensionKind::Length
        } else if toks.iter().any(|t| is(t, "indexof")) {
            ExtensionKind::IndexOf
        } else if toks.iter().any(|t| t.tok == Tok::Punct("[")) {
            ExtensionKind::Character
        } else {
            return Err(syntax(start_tok.line, start_tok.col, "unrecognized assertion"));
        };
        let vars = extension_vars(kind, &toks);
        for v in &vars {
            self.use_var(v, line);
        }
        self.f.extensions.push(Extension { kind, text, vars, line });
        Ok(())
    }
}

/// String variables mentioned by an extension atom: arguments of `len` and
/// `indexof`, and the subscripted names of character constraints.
fn extension_vars(kind: ExtensionKind, toks: &[Token]) -> Vec<Var> {
    let mut out = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        let Tok::Ident(name) = &t.tok else { continue };
        if name == "len" || name == "indexof" {
            continue;
        }
        let next = toks.get(i + 1).map(|t| &t.tok);
        let prev = i.checked_sub(1).map(|j| &toks[j].tok);
        let string_var = match kind {
            ExtensionKind::Character => next == Some(&Tok::Punct("[")),
            ExtensionKind::Length | ExtensionKind::IndexOf => {
                matches!(prev, Some(Tok::Punct("(")) | Some(Tok::Punct(",")))
                    && matches!(next, Some(Tok::Punct(")")) | Some(Tok::Punct(",")))
            }
        };
        if string_var && !out.contains(name) {
            out.push(name.clone());
        }
    }
    out
}
