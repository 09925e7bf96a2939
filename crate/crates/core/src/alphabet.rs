//! Alphabets and words.
//!
//! Symbols are Unicode scalar values. An [`Alphabet`] keeps the order in which
//! symbols were declared; that order drives every tie-break that depends on
//! "lexicographic" order (shortest witnesses, oracle enumeration).

use std::fmt;

/// A single alphabet symbol.
pub type Symbol = char;

/// A finite word over some alphabet.
pub type Word = Vec<Symbol>;

/// First code point of the private range used for solver-internal letters.
pub const PRIVATE_BASE: u32 = 0xE000;

/// Ordered, duplicate-free set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Symbol>>(symbols: I) -> Self {
        let mut out = Alphabet::default();
        for s in symbols {
            out.insert(s);
        }
        out
    }

    pub fn from_str_symbols(s: &str) -> Self {
        Self::new(s.chars())
    }

    /// Appends `s` unless already present. Returns true if it was added.
    pub fn insert(&mut self, s: Symbol) -> bool {
        if self.symbols.contains(&s) {
            false
        } else {
            self.symbols.push(s);
            true
        }
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.contains(&s)
    }

    /// Position of `s` in declaration order.
    pub fn index_of(&self, s: Symbol) -> Option<usize> {
        self.symbols.iter().position(|&c| c == s)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Union keeping `self`'s order first.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut out = self.clone();
        for &s in other.symbols() {
            out.insert(s);
        }
        out
    }

    /// Returns a symbol from the private range that is not in `self`, skipping `avoid`.
    pub fn fresh_symbol(&self, avoid: &[Symbol]) -> Symbol {
        let mut cp = PRIVATE_BASE;
        loop {
            if let Some(c) = char::from_u32(cp) {
                if !self.contains(c) && !avoid.contains(&c) {
                    return c;
                }
            }
            cp += 1;
        }
    }

    /// Compares two words by length, then lexicographically in declaration order.
    pub fn length_lex_cmp(&self, a: &[Symbol], b: &[Symbol]) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                let (ix, iy) = (self.rank(*x), self.rank(*y));
                if ix != iy {
                    return ix.cmp(&iy);
                }
            }
            std::cmp::Ordering::Equal
        })
    }

    fn rank(&self, s: Symbol) -> (usize, u32) {
        match self.index_of(s) {
            Some(i) => (i, 0),
            None => (usize::MAX, s as u32),
        }
    }

    /// All words of length exactly `n`, in lexicographic declaration order.
    pub fn words_of_len(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for w in &out {
                for &s in &self.symbols {
                    let mut w2 = w.clone();
                    w2.push(s);
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `n`, in length-lexicographic order.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| self.words_of_len(k)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// Converts a `&str` into a [`Word`].
pub fn word(s: &str) -> Word {
    s.chars().collect()
}

/// Renders a word as a `String`.
pub fn show(w: &[Symbol]) -> String {
    w.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_declaration_order() {
        let a = Alphabet::from_str_symbols("10");
        assert_eq!(a.symbols(), &['1', '0']);
        assert_eq!(a.words_of_len(2), vec![word("11"), word("10"), word("01"), word("00")]);
    }

    #[test]
    fn fresh_symbols_avoid_alphabet() {
        let a = Alphabet::from_str_symbols("01");
        let x = a.fresh_symbol(&[]);
        let y = a.fresh_symbol(&[x]);
        assert_ne!(x, y);
        assert!(!a.contains(x));
        assert!(x as u32 >= PRIVATE_BASE);
    }

    #[test]
    fn words_up_to_counts() {
        let a = Alphabet::from_str_symbols("ab");
        assert_eq!(a.words_up_to(3).len(), 1 + 2 + 4 + 8);
        let ws = a.words_up_to(3);
        for pair in ws.windows(2) {
            assert_eq!(a.length_lex_cmp(&pair[0], &pair[1]), std::cmp::Ordering::Less);
        }
    }
}
