//! Regular expressions over a declared alphabet.
//!
//! Concrete syntax:
//!
//! | syntax        | meaning                                   |
//! |---------------|-------------------------------------------|
//! | `a`           | the literal code point `a`                |
//! | `"abc"`       | the word `abc` (quoted, `""` is ε)        |
//! | `\c`          | the literal `c`, even if `c` is special   |
//! | `e f`         | concatenation (juxtaposition)             |
//! | `e + f`       | union                                     |
//! | `e*`          | Kleene star                               |
//! | `e?`          | `(e + ())`                                |
//! | `()`          | the empty word ε                          |
//! | `{}`          | the empty language                        |
//! | `( e )`       | grouping                                  |
//!
//! ASCII whitespace is ignored outside quotes.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(Symbol),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexError {
    #[error("empty regular expression (write `()` for the empty word)")]
    EmptyInput,
    #[error("unexpected `{found}` at position {pos}")]
    Unexpected { found: char, pos: usize },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("symbol `{symbol}` at position {pos} is not in the alphabet")]
    NotInAlphabet { symbol: char, pos: usize },
}

impl RegexError {
    pub fn position(&self) -> Option<usize> {
        match self {
            RegexError::EmptyInput => None,
            RegexError::Unexpected { pos, .. }
            | RegexError::UnexpectedEnd { pos }
            | RegexError::NotInAlphabet { pos, .. } => Some(*pos),
        }
    }
}

pub fn lit(c: Symbol) -> Regex {
    Regex::Literal(c)
}

pub fn cat(a: Regex, b: Regex) -> Regex {
    Regex::Concat(Box::new(a), Box::new(b))
}

pub fn alt(a: Regex, b: Regex) -> Regex {
    Regex::Union(Box::new(a), Box::new(b))
}

pub fn star(a: Regex) -> Regex {
    Regex::Star(Box::new(a))
}

/// The regex denoting exactly `w` (ε when `w` is empty).
pub fn word_regex(w: &[Symbol]) -> Regex {
    let mut it = w.iter();
    match it.next() {
        None => Regex::Epsilon,
        Some(&first) => it.fold(lit(first), |acc, &c| cat(acc, lit(c))),
    }
}

impl Regex {
    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Literal(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
        }
    }

    /// True iff ε is in the language.
    pub fn nullable(&self) -> bool {
        match self {
            Regex::Empty | Regex::Literal(_) => false,
            Regex::Epsilon | Regex::Star(_) => true,
            Regex::Union(a, b) => a.nullable() || b.nullable(),
            Regex::Concat(a, b) => a.nullable() && b.nullable(),
        }
    }

    /// Symbols occurring in the expression.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Literal(c) => {
                out.insert(*c);
            }
            Regex::Union(a, b) | Regex::Concat(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Regex::Star(a) => a.collect_symbols(out),
        }
    }

    /// If the expression is syntactically a single word (literals and ε under
    /// concatenation), returns that word.
    pub fn as_word(&self) -> Option<Word> {
        match self {
            Regex::Epsilon => Some(Vec::new()),
            Regex::Literal(c) => Some(vec![*c]),
            Regex::Concat(a, b) => {
                let mut w = a.as_word()?;
                w.extend(b.as_word()?);
                Some(w)
            }
            _ => None,
        }
    }

    /// Direct membership test by structural recursion over the AST.
    pub fn matches(&self, w: &[Symbol]) -> bool {
        let start: BTreeSet<usize> = std::iter::once(0).collect();
        self.ends(w, &start).contains(&w.len())
    }

    /// Positions `j` such that `w[i..j]` is in the language for some `i` in `starts`.
    fn ends(&self, w: &[Symbol], starts: &BTreeSet<usize>) -> BTreeSet<usize> {
        match self {
            Regex::Empty => BTreeSet::new(),
            Regex::Epsilon => starts.clone(),
            Regex::Literal(c) => starts
                .iter()
                .filter(|&&i| i < w.len() && w[i] == *c)
                .map(|&i| i + 1)
                .collect(),
            Regex::Union(a, b) => {
                let mut s = a.ends(w, starts);
                s.extend(b.ends(w, starts));
                s
            }
            Regex::Concat(a, b) => {
                let mid = a.ends(w, starts);
                b.ends(w, &mid)
            }
            Regex::Star(a) => {
                let mut reached = starts.clone();
                let mut frontier = starts.clone();
                while !frontier.is_empty() {
                    let next = a.ends(w, &frontier);
                    frontier = next.difference(&reached).copied().collect();
                    reached.extend(frontier.iter().copied());
                }
                reached
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            Regex::Star(..) => 2,
            _ => 3,
        }
    }
}

const SPECIAL: &[char] = &['(', ')', '+', '*', '?', '"', '\\', '{', '}', '/', '#', ';'];

fn write_symbol(f: &mut fmt::Formatter<'_>, c: char) -> fmt::Result {
    if SPECIAL.contains(&c) || c.is_whitespace() {
        write!(f, "\\{}", c)
    } else {
        write!(f, "{}", c)
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, r: &Regex, min: u8| -> fmt::Result {
            if r.precedence() < min {
                write!(f, "({})", r)
            } else {
                write!(f, "{}", r)
            }
        };
        match self {
            Regex::Empty => write!(f, "{{}}"),
            Regex::Epsilon => write!(f, "()"),
            Regex::Literal(c) => write_symbol(f, *c),
            Regex::Union(a, b) => {
                paren(f, a, 0)?;
                write!(f, "+")?;
                paren(f, b, 1)
            }
            Regex::Concat(a, b) => {
                paren(f, a, 1)?;
                paren(f, b, 2)
            }
            Regex::Star(a) => {
                paren(f, a, 3)?;
                write!(f, "*")
            }
        }
    }
}

/// Parses `text` as a regular expression over `alphabet`.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex, RegexError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        alphabet,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(RegexError::EmptyInput);
    }
    let r = p.union()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(r),
        Some(c) => Err(RegexError::Unexpected {
            found: c,
            pos: p.pos,
        }),
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn symbol(&self, c: char, pos: usize) -> Result<Regex, RegexError> {
        if self.alphabet.contains(c) {
            Ok(lit(c))
        } else {
            Err(RegexError::NotInAlphabet { symbol: c, pos })
        }
    }

    fn union(&mut self) -> Result<Regex, RegexError> {
        let mut r = self.concat()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                let rhs = self.concat()?;
                r = alt(r, rhs);
            } else {
                return Ok(r);
            }
        }
    }

    fn concat(&mut self) -> Result<Regex, RegexError> {
        let mut r: Option<Regex> = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') | Some('+') | Some('}') => break,
                _ => {
                    let p = self.postfix()?;
                    r = Some(match r {
                        None => p,
                        Some(acc) => cat(acc, p),
                    });
                }
            }
        }
        match r {
            Some(r) => Ok(r),
            None => match self.peek() {
                None => Err(RegexError::UnexpectedEnd { pos: self.pos }),
                Some(c) => Err(RegexError::Unexpected {
                    found: c,
                    pos: self.pos,
                }),
            },
        }
    }

    fn postfix(&mut self) -> Result<Regex, RegexError> {
        let mut r = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    r = star(r);
                }
                Some('?') => {
                    self.pos += 1;
                    r = alt(r, Regex::Epsilon);
                }
                _ => return Ok(r),
            }
        }
    }

    fn atom(&mut self) -> Result<Regex, RegexError> {
        self.skip_ws();
        let start = self.pos;
        let c = self
            .peek()
            .ok_or(RegexError::UnexpectedEnd { pos: self.pos })?;
        self.pos += 1;
        match c {
            '(' => {
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                let r = self.union()?;
                self.skip_ws();
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(r)
                    }
                    Some(found) => Err(RegexError::Unexpected {
                        found,
                        pos: self.pos,
                    }),
                    None => Err(RegexError::UnexpectedEnd { pos: self.pos }),
                }
            }
            '{' => {
                self.skip_ws();
                match self.peek() {
                    Some('}') => {
                        self.pos += 1;
                        Ok(Regex::Empty)
                    }
                    Some(found) => Err(RegexError::Unexpected {
                        found,
                        pos: self.pos,
                    }),
                    None => Err(RegexError::UnexpectedEnd { pos: self.pos }),
                }
            }
            '"' => {
                let mut w = Vec::new();
                loop {
                    let p = self.pos;
                    match self.peek() {
                        None => return Err(RegexError::UnexpectedEnd { pos: self.pos }),
                        Some('"') => {
                            self.pos += 1;
                            break;
                        }
                        Some('\\') => {
                            self.pos += 1;
                            let e = self
                                .peek()
                                .ok_or(RegexError::UnexpectedEnd { pos: self.pos })?;
                            self.pos += 1;
                            self.symbol(e, p + 1)?;
                            w.push(e);
                        }
                        Some(ch) => {
                            self.pos += 1;
                            self.symbol(ch, p)?;
                            w.push(ch);
                        }
                    }
                }
                Ok(word_regex(&w))
            }
            '\\' => {
                let e = self
                    .peek()
                    .ok_or(RegexError::UnexpectedEnd { pos: self.pos })?;
                self.pos += 1;
                self.symbol(e, start + 1)
            }
            ')' | '+' | '*' | '?' | '}' => Err(RegexError::Unexpected {
                found: c,
                pos: start,
            }),
            other => self.symbol(other, start),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::word;

    fn bin() -> Alphabet {
        Alphabet::from_str_symbols("01")
    }

    #[test]
    fn parses_star_of_concat() {
        let r = parse_regex("(01)*", &bin()).unwrap();
        assert_eq!(r, star(cat(lit('0'), lit('1'))));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(parse_regex("", &bin()), Err(RegexError::EmptyInput));
        assert_eq!(parse_regex("   ", &bin()), Err(RegexError::EmptyInput));
    }

    #[test]
    fn foreign_symbol_reports_position() {
        let err = parse_regex("01a", &bin()).unwrap_err();
        assert_eq!(
            err,
            RegexError::NotInAlphabet {
                symbol: 'a',
                pos: 2
            }
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(
            parse_regex("(01", &bin()),
            Err(RegexError::UnexpectedEnd { pos: 3 })
        ));
        assert!(matches!(
            parse_regex("0+*", &bin()),
            Err(RegexError::Unexpected { found: '*', pos: 2 })
        ));
        assert!(matches!(
            parse_regex("01)", &bin()),
            Err(RegexError::Unexpected { found: ')', pos: 2 })
        ));
    }

    #[test]
    fn example_pattern_language() {
        let r = parse_regex("0*01(0*+1*)", &bin()).unwrap();
        for w in ["01", "001", "010", "0111", "0100"] {
            assert!(r.matches(&word(w)), "{w}");
        }
        for w in ["", "0", "10", "0101", "011110"] {
            assert!(!r.matches(&word(w)), "{w}");
        }
        assert!(!r.nullable());
    }

    #[test]
    fn epsilon_and_empty() {
        let e = parse_regex("()", &bin()).unwrap();
        assert_eq!(e, Regex::Epsilon);
        assert!(e.matches(&[]));
        assert!(e.nullable());
        let z = parse_regex("{}", &bin()).unwrap();
        assert_eq!(z, Regex::Empty);
        assert!(!z.matches(&[]));
        assert!(!lit('0').nullable());
    }

    #[test]
    fn quoted_words_and_optional() {
        let r = parse_regex("\"010\"?", &bin()).unwrap();
        assert!(r.matches(&word("010")));
        assert!(r.matches(&[]));
        assert_eq!(parse_regex("\"\"", &bin()).unwrap(), Regex::Epsilon);
        assert_eq!(
            parse_regex("\"01\"", &bin()).unwrap().as_word(),
            Some(word("01"))
        );
    }

    #[test]
    fn display_round_trips() {
        let a = Alphabet::from_str_symbols("ab+");
        for text in ["(ab)*+a", "a(b+a)*b", "()", "{}", "a\\+b", "(a+())*", "(a*)*"] {
            let r = parse_regex(text, &a).unwrap();
            let again = parse_regex(&r.to_string(), &a).unwrap();
            assert_eq!(r, again, "{text} printed as {r}");
        }
    }
}
