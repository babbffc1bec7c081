//! Command-line front end. [`run`] parses arguments, dispatches one verb and
//! returns the exit code together with everything it would print.
//!
//! Exit codes: 0 success, 1 a bound or a rewrite failed (the witness is
//! printed), 2 bad usage or bad input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::diagonalize::{count_interval, float_count_interval, float_inertia, inertia, sigma};
use crate::dot::{expanded_to_dot, gpp_to_dot, tree_to_dot};
use crate::enumerate::{sigma_histogram, verify_bounds_range, Bound};
use crate::numerics::Rational;
use crate::transforms::{prototype, read_jsonl, replay, transform, StepOp, TransformError};
use crate::tree::Tree;

/// Environment variable holding the seed for randomized commands.
pub const SEED_VAR: &str = "LAPDIST_SEED";
const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "lapdist", about = "Laplacian eigenvalue location on trees")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Count eigenvalues below and above the average degree.
    Sigma {
        file: PathBuf,
        #[command(flatten)]
        arith: Arith,
        #[arg(long)]
        json: bool,
    },
    /// Count eigenvalues in an interval.
    Count {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lo: Rational,
        #[arg(long, allow_hyphen_values = true)]
        hi: Rational,
        /// Exclude `lo` (included by default).
        #[arg(long)]
        lo_open: bool,
        /// Include `hi` (excluded by default).
        #[arg(long)]
        hi_closed: bool,
        #[command(flatten)]
        arith: Arith,
        #[arg(long)]
        json: bool,
    },
    /// Check both lower bounds on every tree up to an order.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        min_n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a tree into the prototype of its order.
    Transform {
        file: PathBuf,
        /// Write the step records as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write one graph per state, initial and after every step.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Re-run a recorded trace and compare the final tree.
    Replay { trace: PathBuf },
    /// Show the extremal tree of order `n`.
    Prototype {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Time one diagonalization of a random tree.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
        /// Overrides the seed from the environment.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List trees of one order with their sigma distribution.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write every tree as a JSON line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Arith {
    /// Exact rational arithmetic (default).
    #[arg(long)]
    exact: bool,
    /// Floating point; refuses to answer when a value is too close to zero.
    #[arg(long)]
    float: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Exact,
}

/// Exit status plus rendered text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Outcome {
        Outcome { code: 0, output }
    }
    fn violation(output: String) -> Outcome {
        Outcome { code: 1, output }
    }
    fn usage(output: String) -> Outcome {
        Outcome { code: 2, output }
    }
}

/// `argv[0]` is the program name, as with `std::env::args`.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                output: e.render().to_string(),
            };
        }
    };
    match dispatch(cli.verb) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(format!("error: {msg}\n")),
    }
}

fn dispatch(verb: Verb) -> Result<Outcome, String> {
    match verb {
        Verb::Sigma { file, arith, json } => cmd_sigma(&load(&file)?, arith.float, json),
        Verb::Count {
            file,
            lo,
            hi,
            lo_open,
            hi_closed,
            arith,
            json,
        } => cmd_count(&load(&file)?, &lo, &hi, !lo_open, hi_closed, arith.float, json),
        Verb::Verify {
            max_n,
            min_n,
            jobs,
            json,
        } => cmd_verify(min_n, max_n, jobs, json),
        Verb::Transform { file, trace, dot } => cmd_transform(&load(&file)?, trace.as_deref(), dot.as_deref()),
        Verb::Replay { trace } => cmd_replay(&trace),
        Verb::Prototype { n, dot } => cmd_prototype(n, dot.as_deref()),
        Verb::Bench { n, mode, seed } => cmd_bench(n, mode, seed),
        Verb::Enumerate { n, jobs, out } => cmd_enumerate(n, jobs, out.as_deref()),
    }
}

fn load(path: &Path) -> Result<Tree, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Tree::parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Seed from [`SEED_VAR`], falling back to a fixed default.
pub fn seed_from_env() -> Result<u64, String> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_VAR}={s:?} is not an unsigned integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// `p/q`, or just `p` for integers.
fn short(x: &Rational) -> String {
    if x.denom() == &1.into() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}

const AMBIGUOUS: &str = "float arithmetic hit a value within tolerance of zero; re-run with --exact\n";

fn cmd_sigma(tree: &Tree, float: bool, as_json: bool) -> Result<Outcome, String> {
    let n = tree.n();
    let d = tree.average_degree();
    let (below, above) = if float {
        let fi = float_inertia(tree, d.to_f64(), 0).map_err(|e| e.to_string())?;
        if fi.is_ambiguous() {
            return Ok(Outcome::usage(AMBIGUOUS.into()));
        }
        (fi.negative, fi.positive)
    } else {
        let s = sigma(tree);
        (s.below, s.sigma)
    };
    let out = if as_json {
        json!({"n": n, "d_n": d, "m_below": below, "sigma": above}).to_string() + "\n"
    } else {
        format!("n={n} d_n={d} m_below={below} sigma={above}\n")
    };
    Ok(Outcome::ok(out))
}

fn cmd_count(
    tree: &Tree,
    lo: &Rational,
    hi: &Rational,
    lo_closed: bool,
    hi_closed: bool,
    float: bool,
    as_json: bool,
) -> Result<Outcome, String> {
    let count = if float {
        let fc = float_count_interval(tree, lo.to_f64(), hi.to_f64()).map_err(|e| e.to_string())?;
        match fc.count {
            Some(c) => c,
            None => return Ok(Outcome::usage(AMBIGUOUS.into())),
        }
    } else {
        count_interval(tree, lo, hi, lo_closed, hi_closed).map_err(|e| e.to_string())?
    };
    let interval = format!(
        "{}{}, {}{}",
        if lo_closed { '[' } else { '(' },
        short(lo),
        short(hi),
        if hi_closed { ']' } else { ')' }
    );
    let out = if as_json {
        json!({"n": tree.n(), "interval": interval, "count": count}).to_string() + "\n"
    } else {
        format!("n={} m{interval}={count}\n", tree.n())
    };
    Ok(Outcome::ok(out))
}

fn cmd_verify(min_n: usize, max_n: usize, jobs: usize, as_json: bool) -> Result<Outcome, String> {
    if min_n > max_n {
        return Err(format!("--min-n {min_n} exceeds --max-n {max_n}"));
    }
    let rep = verify_bounds_range(min_n, max_n, jobs).map_err(|e| e.to_string())?;
    let mut out = String::new();
    if as_json {
        out = serde_json::to_string(&rep).expect("report serializes") + "\n";
    } else {
        for &(n, c) in &rep.per_order {
            let v = rep.violations.iter().filter(|v| v.n == n).count();
            let _ = writeln!(out, "{c} trees at n={n} ... {v} violations");
        }
        let _ = writeln!(
            out,
            "total {} trees, {} violations, min margin {}, {:.3}s",
            rep.trees_checked,
            rep.violations.len(),
            rep.min_margin.map_or("-".into(), |m| m.to_string()),
            rep.wall_time.as_secs_f64()
        );
        for v in &rep.violations {
            let which = match v.bound {
                Bound::AverageDegree => "m[0,d_n)",
                Bound::Two => "m[0,2)",
            };
            let _ = writeln!(
                out,
                "violation: {which}={} < {} witness {}",
                v.count,
                v.required,
                serde_json::to_string(v).expect("violation serializes")
            );
        }
    }
    Ok(if rep.is_clean() {
        Outcome::ok(out)
    } else {
        Outcome::violation(out)
    })
}

fn cmd_transform(tree: &Tree, trace_path: Option<&Path>, dot_path: Option<&Path>) -> Result<Outcome, String> {
    let trace = match transform(tree) {
        Ok(t) => t,
        Err(TransformError::Improper { trace, .. }) if trace_path.is_some() => {
            let path = trace_path.expect("checked");
            write_file(path, &trace.to_jsonl())?;
            return Ok(Outcome::violation(format!(
                "a step lowered sigma; partial trace written to {}\n",
                path.display()
            )));
        }
        Err(e @ (TransformError::TooSmall { .. } | TransformError::Gpp(_))) => return Err(e.to_string()),
        Err(e) => {
            let witness = json!({"n": tree.n(), "edges": tree.edges()});
            return Ok(Outcome::violation(format!(
                "transform failed: {e}\nwitness {witness}\n"
            )));
        }
    };
    let mut out = String::new();
    let start = sigma(tree);
    let _ = writeln!(out, "n={} sigma={}", tree.n(), start.sigma);
    for s in &trace.steps {
        let sig = match (s.sigma_before, s.sigma_after) {
            (Some(a), Some(b)) => format!(" sigma {a}->{b}"),
            _ => String::new(),
        };
        let label = match &s.op {
            StepOp::Marker { label } => format!(" [{label}]"),
            _ => String::new(),
        };
        let kind = serde_json::to_value(s.kind).expect("kind serializes");
        let _ = writeln!(
            out,
            "step {} {} at {}: {} -> {}{sig}{label}",
            s.step_index,
            kind.as_str().unwrap_or("?"),
            s.vertex,
            s.before,
            s.after
        );
    }
    let end = sigma(&trace.result.to_tree());
    let _ = writeln!(out, "final {} sigma={}", trace.result, end.sigma);
    if let Some(p) = trace_path {
        write_file(p, &trace.to_jsonl())?;
    }
    if let Some(p) = dot_path {
        write_file(p, &trace_dot(&trace)?)?;
    }
    Ok(Outcome::ok(out))
}

/// The initial tree followed by the representation after every rewrite.
fn trace_dot(trace: &crate::transforms::Trace) -> Result<String, String> {
    let mut out = tree_to_dot(&trace.initial, "initial");
    let mut done = Vec::new();
    for s in &trace.steps {
        done.push(s.clone());
        if s.kind.is_marker() {
            continue;
        }
        let rep = replay(&trace.initial, &done).map_err(|e| e.to_string())?;
        out.push_str(&gpp_to_dot(&rep, &format!("step_{}", s.step_index)));
    }
    Ok(out)
}

fn cmd_replay(path: &Path) -> Result<Outcome, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parsed = read_jsonl(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let rep = match replay(&parsed.initial, &parsed.steps) {
        Ok(r) => r,
        Err(e) => return Ok(Outcome::violation(format!("replay failed: {e}\n"))),
    };
    let got = rep.to_tree().canonical_code();
    let mut out = format!("replayed {} steps, final {}\n", parsed.steps.len(), rep);
    match parsed.final_tree {
        Some(fin) if fin.canonical_code() == got => {
            out.push_str("final canonical code matches\n");
            Ok(Outcome::ok(out))
        }
        Some(_) => {
            out.push_str("final canonical code differs from the recorded tree\n");
            Ok(Outcome::violation(out))
        }
        None => {
            out.push_str("no final record to compare against\n");
            Ok(Outcome::ok(out))
        }
    }
}

fn cmd_prototype(n: usize, dot_path: Option<&Path>) -> Result<Outcome, String> {
    let rep = prototype(n).map_err(|e| e.to_string())?;
    let t = rep.to_tree();
    let s = sigma(&t);
    let out = format!("n={n} {rep} sigma={} m_below={}\n", s.sigma, s.below);
    if let Some(p) = dot_path {
        write_file(p, &expanded_to_dot(&rep, &format!("prototype_{n}")))?;
    }
    Ok(Outcome::ok(out))
}

fn cmd_bench(n: usize, mode: Mode, seed: Option<u64>) -> Result<Outcome, String> {
    let seed = match seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = Tree::random(n, &mut rng).map_err(|e| e.to_string())?;
    let d = tree.average_degree();
    let start = Instant::now();
    let (neg, pos, amb) = match mode {
        Mode::Float => {
            let fi = float_inertia(&tree, d.to_f64(), 0).map_err(|e| e.to_string())?;
            (fi.negative, fi.positive, fi.ambiguous)
        }
        Mode::Exact => {
            let i = inertia(&tree, &d);
            (i.negative, i.positive, i.zero)
        }
    };
    let secs = start.elapsed().as_secs_f64();
    let mode = match mode {
        Mode::Float => "float",
        Mode::Exact => "exact",
    };
    Ok(Outcome::ok(format!(
        "n={n} mode={mode} seed={seed} negative={neg} positive={pos} ambiguous={amb} total={} time={secs:.3}s\n",
        neg + pos + amb
    )))
}

fn cmd_enumerate(n: usize, jobs: usize, out_path: Option<&Path>) -> Result<Outcome, String> {
    let hist = sigma_histogram(n, jobs).map_err(|e| e.to_string())?;
    let total: u64 = hist.values().sum();
    let mut out = format!("{total} trees at n={n}\n");
    for (s, c) in &hist {
        let _ = writeln!(out, "sigma={s}: {c}");
    }
    if let Some(p) = out_path {
        let mut text = String::new();
        for t in crate::enumerate::free_trees(n).map_err(|e| e.to_string())? {
            text.push_str(&json!({"n": t.n(), "edges": t.edges()}).to_string());
            text.push('\n');
        }
        write_file(p, &text)?;
    }
    Ok(Outcome::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("lapdist").chain(args.iter().copied()))
    }

    #[test]
    fn rejects_missing_and_unknown_verbs_and_flags() {
        assert_eq!(go(&[]).code, 2);
        assert_eq!(go(&["frobnicate"]).code, 2);
        assert_eq!(go(&["prototype", "--n", "9", "--bogus"]).code, 2);
        assert_eq!(go(&["prototype", "--n", "9", "sigma"]).code, 2);
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(go(&["--help"]).code, 0);
    }

    #[test]
    fn prototype_reports_sigma() {
        let o = go(&["prototype", "--n", "9"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.output, "n=9 u + P_0*S_2 ⊕ P_0*S_2 sigma=4 m_below=5\n");
        assert_eq!(go(&["prototype", "--n", "5"]).code, 2);
    }

    #[test]
    fn exact_and_float_flags_conflict() {
        assert_eq!(go(&["sigma", "x.tree", "--exact", "--float"]).code, 2);
    }
}
