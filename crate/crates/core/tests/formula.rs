use std::path::PathBuf;

use proptest::prelude::*;
use rand::Rng;

use strline::formula::graph::brute_force;
use strline::formula::{
    build_dependency_graph, check_straight_line, classify, desugar_concat, unsupported_reason, Definition,
    FormulaError, FragmentClass, Pattern, Rhs, Term,
};
use strline::gen::{random_dag, random_dependency_graph, random_formula, rng, FormulaConfig};
use strline::oracle::{brute_force_sat, OracleResult};
use strline::{parse_formula, show, Formula};

fn example(name: &str) -> Formula {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../formulas").join(format!("{name}.str"));
    parse_formula(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn graph_statistics_match_brute_force() {
    let mut r = rng(99);
    for i in 0..200 {
        let n = r.gen_range(1..=7);
        let g = if i % 2 == 0 { random_dag(&mut r, n, 0.4) } else { random_dependency_graph(&mut r, n) };
        assert_eq!(g.diamond_index(), brute_force::diamond_index(&g), "{}", g.to_dot());
        assert_eq!(g.l_length(), brute_force::l_length(&g), "{}", g.to_dot());
        for a in 0..n {
            for b in 0..n {
                assert_eq!(g.count_paths(a, b), brute_force::paths(&g, a, b).len() as u128);
                if a != b {
                    assert_eq!(g.has_diamond(a, b), brute_force::has_diamond(&g, a, b));
                }
            }
        }
    }
}

#[test]
fn diamond_index_is_bounded_by_l_length() {
    let mut r = rng(5);
    for _ in 0..300 {
        let n = r.gen_range(1..=8);
        let g = random_dependency_graph(&mut r, n);
        assert!(g.diamond_index() <= g.l_length(), "{}", g.to_dot());
    }
}

#[test]
fn three_diamond_chain() {
    let f = parse_formula(
        "alphabet \"a\";\nx1 := replaceall(x2, \"a\", x2);\nx2 := replaceall(x3, \"a\", x3);\nx3 := replaceall(y1, \"a\", y1);",
    )
    .unwrap();
    let g = build_dependency_graph(&f);
    assert_eq!(g.diamond_index(), 3);
    assert_eq!(g.count_paths(g.vertex("x1").unwrap(), g.vertex("y1").unwrap()), 8);
}

#[test]
fn example_classifications() {
    assert_eq!(
        classify(&example("two_letter")).to_string(),
        "single-letter; diamond-index 0; l-length 2; depth 2; advisory: PSPACE fragment (single-letter patterns, diamond index at most 0)"
    );
    assert_eq!(classify(&example("constant")).class, FragmentClass::ConstantString);
    assert_eq!(classify(&example("regex")).class, FragmentClass::RegexPattern);
    let g = build_dependency_graph(&example("nested"));
    assert_eq!((g.num_vertices(), g.edges.len()), (5, 4));
}

#[test]
fn undecidable_features_are_refused_with_their_reason() {
    for (name, class) in [
        ("var_pattern", FragmentClass::VarPattern),
        ("length", FragmentClass::ExtendedUndecidable),
        ("character", FragmentClass::ExtendedUndecidable),
        ("indexof", FragmentClass::ExtendedUndecidable),
    ] {
        let f = example(name);
        let c = classify(&f);
        assert_eq!(c.class, class, "{name}");
        assert_eq!(c.reason.as_deref(), unsupported_reason(&f), "{name}");
        assert!(c.reason.is_some(), "{name}");
    }
    let reasons: std::collections::BTreeSet<_> = ["var_pattern", "length", "character", "indexof"]
        .iter()
        .map(|n| unsupported_reason(&example(n)).unwrap())
        .collect();
    assert_eq!(reasons.len(), 4);
}

/// Random definitions over `x0..x{n-1}` and `y`, possibly cyclic.
fn definitions(n: usize, refs: &[(usize, usize)]) -> Formula {
    let name = |k: usize| if k < n { format!("x{k}") } else { "y".to_string() };
    let mut text = String::from("alphabet \"01\";\n");
    for (i, &(s, t)) in refs.iter().enumerate().take(n) {
        text.push_str(&format!("{} := replaceall({}, \"0\", {});\n", name(i), name(s), name(t)));
    }
    parse_formula(&text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn straight_line_check_agrees_with_permutation_search(n in 1usize..=5, refs in proptest::collection::vec((0usize..6, 0usize..6), 5)) {
        let refs: Vec<(usize, usize)> = refs.into_iter().map(|(s, t)| (s.min(n), t.min(n))).collect();
        let f = definitions(n, &refs);
        let valid = |order: &[usize]| {
            order.iter().enumerate().all(|(pos, &i)| {
                f.definitions[i].rhs.vars().iter().all(|v| {
                    match f.definitions.iter().position(|d| &d.var == *v) {
                        Some(j) => order[..pos].contains(&j),
                        None => true,
                    }
                })
            })
        };
        let mut exists = false;
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| exists |= valid(p));
        match check_straight_line(&f) {
            Ok(order) => {
                prop_assert!(exists);
                prop_assert!(valid(&order));
            }
            Err(FormulaError::Cyclic { .. }) => prop_assert!(!exists),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn desugared_concatenation_evaluates_to_the_concatenation(s1 in "[01]{0,6}", s2 in "[01]{0,6}") {
        let f = parse_formula(&format!("alphabet \"01\"; x := \"{s1}\" . \"{s2}\";")).unwrap();
        let d = desugar_concat(&f);
        prop_assert!(!d.formula.has_concat());
        let Ok(OracleResult::SatWitness(m)) = brute_force_sat(&d.formula, 0) else {
            return Err(TestCaseError::fail("constant formula must be satisfiable"));
        };
        prop_assert_eq!(show(&m["x"]), format!("{s1}{s2}"));
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

#[test]
fn desugaring_preserves_oracle_verdicts() {
    let mut r = rng(17);
    let cfg = FormulaConfig {
        concat: true,
        ..FormulaConfig::default()
    };
    let mut seen = 0;
    while seen < 100 {
        let f = random_formula(&mut r, &cfg);
        if !f.has_concat() {
            continue;
        }
        seen += 1;
        let d = desugar_concat(&f);
        let fresh = d.fresh.unwrap();
        let a = brute_force_sat(&f, 3).unwrap();
        let b = brute_force_sat(&d.formula, 3).unwrap();
        assert_eq!(matches!(a, OracleResult::SatWitness(_)), matches!(b, OracleResult::SatWitness(_)), "{f}");
        if let OracleResult::SatWitness(m) = b {
            // Fresh letters never reach a visible variable.
            for (v, w) in &m {
                if !d.formula.hidden.contains(v) {
                    assert!(!w.contains(&fresh.0) && !w.contains(&fresh.1), "{f}");
                }
            }
        }
    }
}

#[test]
fn synthesized_definitions_are_hidden() {
    let f = example("concat");
    let d = desugar_concat(&f);
    let extra: Vec<&Definition> = d.formula.definitions.iter().filter(|d| d.var.ends_with("#pre")).collect();
    assert!(!extra.is_empty());
    for e in extra {
        assert!(d.formula.hidden.contains(&e.var));
        assert!(matches!(
            &e.rhs,
            Rhs::ReplaceAll {
                subject: Term::Const(w),
                pattern: Pattern::Const(_),
                ..
            } if w.len() == 2
        ));
    }
}
