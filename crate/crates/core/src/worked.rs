//! A hand-built instance with a fixed trace, for replay tests.
//!
//! `x := replaceall(y, 0, z)`, `y := replaceall(y', 1, z')` with
//! `x ∈ (0+1)*(00(0+1)* + 11(0+1)*)`, `y ∈ (01)*`, `z ∈ (10)*`,
//! `y' ∈ 0*1*0*1*`, `z' ∈ 0*1*`. The automata use small, fixed state numbers
//! so the trace can name pairs directly.

use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::automata::{Nfa, State, TransitionGraph};
use crate::elimination::{GuessTrace, PatternAutomaton, Step};
use crate::regex::lit;
use crate::solver::Instance;

fn nfa(states: usize, edges: &[(State, char, State)], finals: &[State], names: &[&str]) -> Nfa {
    let e: Vec<_> = edges.iter().map(|&(p, c, q)| (p, Some(c), q)).collect();
    let mut g = TransitionGraph::from_edges(states, &e).expect("valid edges");
    for (q, n) in names.iter().enumerate() {
        g.set_label(q, n.to_string());
    }
    Nfa::new(Arc::new(g), 0, finals.iter().copied()).expect("valid finals")
}

/// `q0` loops on both letters; `q0 -1-> q1 -1-> q2`, `q0 -0-> q3 -0-> q2`; `q2` loops; final `q2`.
pub fn double_letter() -> Nfa {
    nfa(
        4,
        &[
            (0, '0', 0),
            (0, '1', 0),
            (0, '1', 1),
            (1, '1', 2),
            (0, '0', 3),
            (3, '0', 2),
            (2, '0', 2),
            (2, '1', 2),
        ],
        &[2],
        &["q0", "q1", "q2", "q3"],
    )
}

/// The nested instance and the trace under which its model chain is
/// `y' = 11`, `z' = 01`, `z = 10`, `y = 0101`, `x = 101101`.
pub fn nested() -> (Instance, GuessTrace) {
    let vars: Vec<String> = ["x", "y", "z", "y'", "z'"].iter().map(|s| s.to_string()).collect();
    let memberships = vec![
        (0, double_letter()),
        (1, nfa(2, &[(0, '0', 1), (1, '1', 0)], &[0], &["q0'", "q1'"])),
        (2, nfa(2, &[(0, '1', 1), (1, '0', 0)], &[0], &["p0", "p1"])),
        (
            3,
            nfa(
                4,
                &[(0, '0', 0), (0, '1', 1), (1, '1', 1), (1, '0', 2), (2, '0', 2), (2, '1', 3), (3, '1', 3)],
                &[0, 1, 2, 3],
                &["r0", "r1", "r2", "r3"],
            ),
        ),
        (4, nfa(2, &[(0, '0', 0), (0, '1', 1), (1, '1', 1)], &[0, 1], &["s0", "s1"])),
    ];
    let inst = Instance {
        alphabet: Alphabet::from_str_symbols("01"),
        vars,
        steps: vec![
            Step {
                def: 0,
                x: 1,
                y: 3,
                z: 4,
                pattern: PatternAutomaton::Letter('1'),
            },
            Step {
                def: 1,
                x: 0,
                y: 1,
                z: 2,
                pattern: PatternAutomaton::Letter('0'),
            },
        ],
        patterns: vec![lit('1'), lit('0')],
        memberships,
    };
    let trace = GuessTrace {
        finals: vec![(0, 2), (1, 0), (2, 0), (3, 1), (4, 1)],
        steps: vec![
            ("x".into(), vec![[(0, 0), (1, 2)].into()]),
            ("y".into(), vec![[(0, 0)].into(), [(0, 1), (1, 2)].into()]),
        ],
    };
    (inst, trace)
}
