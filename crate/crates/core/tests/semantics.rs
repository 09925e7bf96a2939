use proptest::prelude::*;

use strline::gen::{random_regex, rng};
use strline::regex::{alt, lit, star, word_regex};
use strline::semantics::{match_decomposition, replace_all_reference, splice, Decomposition, Segment};
use strline::{leftmost_longest_match, parse_regex, replace_all, show, word, Alphabet, MatchSpan, Regex, Word};

fn bin() -> Alphabet {
    Alphabet::from_str_symbols("01")
}

fn binary_word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just('0'), Just('1')], 0..=max)
}

/// Random patterns, with an ε alternative mixed in now and then.
fn pattern() -> impl Strategy<Value = Regex> {
    (any::<u64>(), 1usize..=8, 0u8..4).prop_map(|(seed, size, eps)| {
        let r = random_regex(&mut rng(seed), &bin(), size);
        if eps == 0 {
            alt(r, Regex::Epsilon)
        } else {
            r
        }
    })
}

#[test]
fn golden_replacements() {
    let abcd = Alphabet::from_str_symbols("abcd");
    let cases = [
        ("abab", "ab", "d", "dd"),
        ("baac", "aa*", "b", "bbc"),
        ("baac", "a*", "b", "bbbcb"),
    ];
    for (u, p, v, want) in cases {
        let e = parse_regex(p, &abcd).unwrap();
        assert_eq!(show(&replace_all(&word(u), &e, &word(v))), want, "{u} {p} {v}");
    }
    assert_eq!(show(&replace_all(&word("aaaa"), &Regex::Epsilon, &word("d"))), "dadadadad");
}

#[test]
fn golden_spans() {
    let e = parse_regex("0*01(0*+1*)", &bin()).unwrap();
    assert_eq!(leftmost_longest_match(&word("1010101"), &e), Some(MatchSpan { start: 1, len: 3 }));
    let ab = Alphabet::from_str_symbols("abc");
    let e = parse_regex("a*", &ab).unwrap();
    assert_eq!(leftmost_longest_match(&word("baac"), &e), Some(MatchSpan { start: 0, len: 0 }));
}

#[test]
fn nullable_patterns_have_no_decomposition() {
    assert!(match_decomposition(&word("01"), &star(lit('0'))).is_err());
    assert!(match_decomposition(&word("01"), &Regex::Epsilon).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn evaluator_agrees_with_the_recursive_definition(u in binary_word(10), e in pattern(), v in binary_word(3)) {
        prop_assert_eq!(replace_all(&u, &e, &v), replace_all_reference(&u, &e, &v));
    }

    #[test]
    fn leftmost_match_is_leftmost_and_longest(u in binary_word(10), e in pattern()) {
        let got = leftmost_longest_match(&u, &e);
        let mut want = None;
        'outer: for i in 0..=u.len() {
            for j in (i..=u.len()).rev() {
                if e.matches(&u[i..j]) {
                    want = Some(MatchSpan { start: i, len: j - i });
                    break 'outer;
                }
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn decomposition_covers_the_subject_and_splices_to_replace_all(u in binary_word(10), e in pattern(), v in binary_word(3)) {
        prop_assume!(!e.nullable());
        let d: Decomposition = match_decomposition(&u, &e).unwrap();
        let mut pos = 0;
        for s in &d.segments {
            match *s {
                Segment::Gap { start, len } => {
                    prop_assert_eq!(start, pos);
                    prop_assert!(len > 0);
                    pos += len;
                }
                Segment::Match(m) => {
                    prop_assert_eq!(m.start, pos);
                    prop_assert!(m.len > 0 && e.matches(&u[m.start..m.end()]));
                    pos = m.end();
                }
            }
        }
        prop_assert_eq!(pos, u.len());
        prop_assert_eq!(d.splice(&u, &v), replace_all(&u, &e, &v));
        prop_assert_eq!(splice(&u, &d.spans(), &v), replace_all(&u, &e, &v));
    }

    #[test]
    fn single_letter_pattern_is_a_letter_map(u in binary_word(10), v in binary_word(3)) {
        let mapped: Word = u.iter().flat_map(|&c| if c == '0' { v.clone() } else { vec![c] }).collect();
        prop_assert_eq!(replace_all(&u, &lit('0'), &v), mapped);
    }

    #[test]
    fn concatenation_encoding(s1 in binary_word(6), s2 in binary_word(6)) {
        let pre = replace_all(&word("ab"), &lit('a'), &s1);
        let out = replace_all(&pre, &lit('b'), &s2);
        prop_assert_eq!(out, [s1, s2].concat());
    }

    #[test]
    fn constant_patterns_match_their_word_only(u in binary_word(10), p in binary_word(4), v in binary_word(2)) {
        prop_assume!(!p.is_empty());
        let e = word_regex(&p);
        prop_assert_eq!(replace_all(&u, &e, &v), replace_all_reference(&u, &e, &v));
    }
}
