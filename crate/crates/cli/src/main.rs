use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use strline::automata::dot::nfa_to_dot;
use strline::automata::{compile, minimize};
use strline::formula::{build_dependency_graph, check_straight_line, classify, parse_formula, Pattern, Rhs};
use strline::gen::{random_formula, rng, FormulaConfig};
use strline::oracle::{brute_force_sat, OracleResult};
use strline::parsing::parsing_automaton;
use strline::report::{quote, RunReport};
use strline::solver::{solve_detailed, SearchLimits, Verdict};
use strline::{parse_regex, replace_all, show, Alphabet, Formula, Regex};

const EXIT_SAT: u8 = 0;
const EXIT_UNSAT: u8 = 1;
const EXIT_UNSUPPORTED: u8 = 2;
const EXIT_RESOURCE_OUT: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "strline", version, about = "Straight-line string constraints with replaceall and regular membership")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula file and print a report.
    Solve {
        path: String,
        #[command(flatten)]
        limits: LimitArgs,
        /// Add `stat time-ms`.
        #[arg(long)]
        timing: bool,
        /// Print the guesses of the successful branch to standard error.
        #[arg(long)]
        trace: bool,
    },
    /// Print replaceall(subject, pattern, replacement); the pattern is a regex.
    Eval {
        subject: String,
        pattern: String,
        replacement: String,
    },
    /// Print the fragment class and dependency-graph statistics.
    Classify { path: String },
    /// Print a DOT graph: `depgraph`, `membership` (all), `membership:<var>` or `parsing:<var>`.
    Dot { path: String, target: String },
    /// Bounded brute-force search for a model.
    Oracle {
        path: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Print random formulas.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Allow concatenation definitions.
        #[arg(long)]
        concat: bool,
    },
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = SearchLimits::default().max_product_states)]
    max_product_states: usize,
    #[arg(long, default_value_t = SearchLimits::default().max_branches)]
    max_branches: usize,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Explore top-level branches in parallel; the answer is unchanged.
    #[arg(long)]
    parallel: bool,
    /// Merge accepting states instead of branching on them.
    #[arg(long)]
    defer_finals: bool,
}

impl LimitArgs {
    fn limits(&self) -> Result<SearchLimits, String> {
        if self.max_product_states == 0 || self.max_branches == 0 || self.timeout_ms == Some(0) {
            return Err("limits must be positive".into());
        }
        Ok(SearchLimits {
            max_product_states: self.max_product_states,
            max_branches: self.max_branches,
            timeout: self.timeout_ms.map(Duration::from_millis),
            parallel: self.parallel,
            defer_finals: self.defer_finals,
            ..SearchLimits::default()
        })
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(s: impl std::fmt::Display) {
    let _ = write!(std::io::stdout().lock(), "{s}");
}

/// An error with its exit code.
struct Fail(u8, String);

fn input(msg: impl ToString) -> Fail {
    Fail(EXIT_INPUT, msg.to_string())
}

fn load(path: &str) -> Result<Formula, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?;
    let f = parse_formula(&text).map_err(|e| input(format!("{path}: {e}")))?;
    check_straight_line(&f).map_err(|e| input(format!("{path}: {e}")))?;
    Ok(f)
}

fn solve(path: &str, limits: &LimitArgs, timing: bool, trace: bool) -> Result<u8, Fail> {
    let f = load(path)?;
    let limits = limits.limits().map_err(input)?;
    let o = solve_detailed(&f, &limits).map_err(|e| Fail(EXIT_INTERNAL, format!("internal error: {e}")))?;
    emit(format_args!("{}", RunReport::from_outcome(&o, timing)));
    if let (true, Some(t)) = (trace, &o.trace) {
        eprint!("{t}");
    }
    Ok(match o.verdict {
        Verdict::Sat(_) => EXIT_SAT,
        Verdict::Unsat => EXIT_UNSAT,
        Verdict::Unsupported(_) => EXIT_UNSUPPORTED,
        Verdict::ResourceOut(_) => EXIT_RESOURCE_OUT,
    })
}

fn eval(subject: &str, pattern: &str, replacement: &str) -> Result<u8, Fail> {
    let alphabet = Alphabet::new(subject.chars().chain(pattern.chars()).chain(replacement.chars()));
    let e = if pattern.is_empty() {
        Regex::Epsilon
    } else {
        parse_regex(pattern, &alphabet).map_err(|e| input(format!("pattern: {e}")))?
    };
    let out = replace_all(&subject.chars().collect::<Vec<_>>(), &e, &replacement.chars().collect::<Vec<_>>());
    emit(format_args!("{}\n", show(&out)));
    Ok(0)
}

fn dot(path: &str, target: &str) -> Result<u8, Fail> {
    let f = load(path)?;
    if target == "depgraph" {
        emit(format_args!("{}", build_dependency_graph(&f).to_dot()));
        return Ok(0);
    }
    let (kind, var) = target.split_once(':').unwrap_or((target, ""));
    match kind {
        "membership" => {
            let ms: Vec<_> = f.memberships.iter().filter(|m| var.is_empty() || m.var == var).collect();
            if ms.is_empty() {
                return Err(input(format!("no membership for `{var}`")));
            }
            for (i, m) in ms.iter().enumerate() {
                let a = minimize(&compile(&m.regex, &f.alphabet), &f.alphabet);
                emit(format_args!("{}", nfa_to_dot(&format!("{} {i}", m.var), &a)));
            }
            Ok(0)
        }
        "parsing" => {
            let d = f.definition_of(var).ok_or_else(|| input(format!("no definition of `{var}`")))?;
            let e = match &d.rhs {
                Rhs::ReplaceAll {
                    pattern: p @ (Pattern::Const(_) | Pattern::Regex(_)),
                    ..
                } => p.to_regex().unwrap(),
                _ => return Err(input(format!("`{var}` has no constant pattern"))),
            };
            let pa = parsing_automaton(&e, &f.alphabet, SearchLimits::default().max_product_states)
                .map_err(|e| Fail(EXIT_RESOURCE_OUT, e.to_string()))?;
            emit(format_args!("{}", nfa_to_dot(&format!("parsing {var}"), &pa.to_nfa())));
            Ok(0)
        }
        _ => Err(input(format!("unknown dot target `{target}`"))),
    }
}

fn oracle(path: &str, max_len: usize) -> Result<u8, Fail> {
    let f = load(path)?;
    match brute_force_sat(&f, max_len).map_err(|e| Fail(EXIT_UNSUPPORTED, e.to_string()))? {
        OracleResult::SatWitness(m) => {
            emit(format_args!("result: sat-witness\n"));
            for (v, w) in m.iter().filter(|(v, _)| !f.hidden.contains(*v)) {
                emit(format_args!("model {v} = {}\n", quote(w)));
            }
            Ok(EXIT_SAT)
        }
        OracleResult::NoWitnessUpTo(n) => {
            emit(format_args!("result: no-witness-up-to {n}\n"));
            Ok(EXIT_UNSAT)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.command {
        Command::Solve {
            path,
            limits,
            timing,
            trace,
        } => solve(&path, &limits, timing, trace),
        Command::Eval {
            subject,
            pattern,
            replacement,
        } => eval(&subject, &pattern, &replacement),
        Command::Classify { path } => {
            emit(format_args!("{}\n", classify(&load(&path)?)));
            Ok(0)
        }
        Command::Dot { path, target } => dot(&path, &target),
        Command::Oracle { path, max_len } => oracle(&path, max_len),
        Command::Generate { seed, count, concat } => {
            let mut r = rng(seed);
            let cfg = FormulaConfig {
                concat,
                ..FormulaConfig::default()
            };
            for i in 0..count {
                if i > 0 {
                    emit("\n");
                }
                emit(format_args!("{}", random_formula(&mut r, &cfg)));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("strline: {msg}");
            ExitCode::from(code)
        }
    }
}
