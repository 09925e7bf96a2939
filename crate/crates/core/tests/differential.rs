use strline::gen::{random_formula, rng, FormulaConfig};
use strline::oracle::{brute_force_sat, OracleResult};
use strline::solver::{solve_detailed, verify_model, SearchLimits, Verdict};

fn agree(seed: u64, cfg: &FormulaConfig) -> Result<&'static str, String> {
    let f = random_formula(&mut rng(seed), cfg);
    let oracle = brute_force_sat(&f, 4).unwrap();
    let o = solve_detailed(&f, &SearchLimits::default()).map_err(|e| format!("seed {seed}: {e}\n{f}"))?;
    growth_telemetry(seed, &f, &o);
    match (&oracle, &o.verdict) {
        (_, Verdict::Sat(m)) => {
            verify_model(&f, m).map_err(|e| format!("seed {seed}: {e}"))?;
            Ok("sat")
        }
        (OracleResult::NoWitnessUpTo(_), Verdict::Unsat) => Ok("unsat"),
        (_, v) => Err(format!("seed {seed}: oracle {oracle:?}, solver {v:?}\n{f}")),
    }
}

/// Soft check: constraint counts stay within `K·|vars|·(|vars|·|E|)^(2·idx)`.
/// Reported, never failed; the bound is asymptotic.
fn growth_telemetry(seed: u64, f: &strline::Formula, o: &strline::solver::Outcome) {
    const K: f64 = 16.0;
    let g = strline::formula::build_dependency_graph(f);
    let (v, e) = (g.num_vertices() as f64, g.edges.len().max(1) as f64);
    let bound = K * v * (v * e).powi(2 * o.classification.diamond_index as i32);
    if o.stats.constraints as f64 > bound {
        eprintln!("telemetry: seed {seed}: {} constraints above soft bound {bound}", o.stats.constraints);
    }
}

#[test]
fn solver_agrees_with_oracle() {
    let cfg = FormulaConfig::default();
    let mut failures = Vec::new();
    let (mut sat, mut unsat) = (0, 0);
    for seed in 0..300 {
        match agree(seed, &cfg) {
            Ok("sat") => sat += 1,
            Ok(_) => unsat += 1,
            Err(e) => failures.push(e),
        }
    }
    eprintln!("sat {sat}, unsat {unsat}, failures {}", failures.len());
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn solver_agrees_with_oracle_on_concatenation() {
    let cfg = FormulaConfig {
        concat: true,
        ..FormulaConfig::default()
    };
    let failures: Vec<String> = (0..80).filter_map(|seed| agree(10_000 + seed, &cfg).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}
