use std::collections::BTreeMap;

use strline::gen::{random_formula, rng, FormulaConfig};
use strline::solver::{solve_detailed, verify_model, SearchLimits, Verdict};
use strline::{parse_formula, word, Formula};

fn load(name: &str) -> Formula {
    let path = format!("{}/../../formulas/{name}.str", env!("CARGO_MANIFEST_DIR"));
    parse_formula(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn verdict(f: &Formula, limits: &SearchLimits) -> Verdict {
    solve_detailed(f, limits).unwrap().verdict
}

#[test]
fn repeated_runs_are_identical() {
    for name in ["single_letter", "nested", "constant", "regex", "concat", "unsat"] {
        let f = load(name);
        let first = solve_detailed(&f, &SearchLimits::default()).unwrap();
        for _ in 0..3 {
            let again = solve_detailed(&f, &SearchLimits::default()).unwrap();
            assert_eq!(again.verdict, first.verdict, "{name}");
            assert_eq!(again.stats.branches, first.stats.branches, "{name}");
            assert_eq!(again.trace.as_ref().map(|t| t.to_string()), first.trace.as_ref().map(|t| t.to_string()));
        }
    }
}

#[test]
fn search_options_do_not_change_the_answer() {
    let base = SearchLimits::default();
    let variants = [
        SearchLimits { parallel: true, ..base.clone() },
        SearchLimits { defer_finals: true, ..base.clone() },
    ];
    let mut r = rng(41);
    for _ in 0..60 {
        let f = random_formula(&mut r, &FormulaConfig::default());
        let v = verdict(&f, &base);
        for limits in &variants {
            let w = verdict(&f, limits);
            assert_eq!(v.kind(), w.kind(), "{f}");
            if let Verdict::Sat(m) = &w {
                verify_model(&f, m).unwrap();
            }
        }
        assert_eq!(verdict(&f, &variants[0]), verdict(&f, &variants[0]), "{f}");
    }
}

#[test]
fn tiny_budgets_give_up_instead_of_answering_wrongly() {
    let f = load("regex");
    let limits = SearchLimits {
        max_product_states: 3,
        ..SearchLimits::default()
    };
    assert!(matches!(verdict(&f, &limits), Verdict::ResourceOut(r) if r == "max-product-states"));
    let limits = SearchLimits {
        max_branches: 1,
        ..SearchLimits::default()
    };
    match verdict(&load("unsat"), &limits) {
        Verdict::Unsat | Verdict::ResourceOut(_) => {}
        v => panic!("{v:?}"),
    }
}

#[test]
fn unsupported_formulas_are_refused() {
    for name in ["var_pattern", "length", "character", "indexof"] {
        assert!(matches!(verdict(&load(name), &SearchLimits::default()), Verdict::Unsupported(_)), "{name}");
    }
}

#[test]
fn verification_rejects_wrong_models() {
    let f = load("single_letter");
    let good: BTreeMap<String, _> = [("x", "101101"), ("y", "0101"), ("z", "10")].map(|(k, v)| (k.to_string(), word(v))).into();
    verify_model(&f, &good).unwrap();
    let mut wrong_value = good.clone();
    wrong_value.insert("x".into(), word("1011"));
    assert!(verify_model(&f, &wrong_value).is_err());
    let mut not_member = good.clone();
    not_member.insert("z".into(), word("1"));
    assert!(verify_model(&f, &not_member).is_err());
    let mut missing = good;
    missing.remove("y");
    assert!(verify_model(&f, &missing).is_err());
}

#[test]
fn unconstrained_sources_get_the_empty_word() {
    let f = parse_formula("alphabet \"01\"; x := replaceall(y, \"0\", z); assert x in /1(0+1)*/;").unwrap();
    let Verdict::Sat(m) = verdict(&f, &SearchLimits::default()) else { panic!() };
    verify_model(&f, &m).unwrap();
    assert_eq!(m["z"], word(""));
}

#[test]
fn models_stay_in_the_declared_alphabet() {
    let o = solve_detailed(&load("concat"), &SearchLimits::default()).unwrap();
    let Verdict::Sat(m) = &o.verdict else { panic!() };
    for (k, v) in m {
        assert!(o.hidden.contains(k) || v.iter().all(|c| "01".contains(*c)), "{k}");
    }
    assert!(["w", "x", "y"].iter().all(|k| m.contains_key(*k) && !o.hidden.contains(*k)));
}
