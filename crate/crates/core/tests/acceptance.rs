//! End-to-end acceptance checks, one PASS/FAIL line per check.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lapdist::cli::seed_from_env;
use lapdist::diagonalize::{diagonalize, float_inertia, inertia, sigma, Inertia};
use lapdist::enumerate::{verify_bounds, verify_pipeline};
use lapdist::gpp::{path_values, sun_values, Gpp};
use lapdist::numerics::{average_degree, Rational, Sign};
use lapdist::oracle::{dense_inertia, float_spectrum, sturm_inertia, two_sun_spectrum};
use lapdist::transforms::{closed_form_f, prototype, transform, StepKind};
use lapdist::Tree;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b).unwrap()
}

/// Free trees on 2..=16 vertices.
const FREE_TREE_COUNTS: [u64; 15] = [1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320];

fn exhaustive_bounds() -> Result<String, String> {
    let rep = verify_bounds(16, 4).map_err(|e| e.to_string())?;
    ensure(rep.trees_checked == FREE_TREE_COUNTS.iter().sum::<u64>(), || {
        format!("checked {} trees", rep.trees_checked)
    })?;
    ensure(rep.is_clean(), || {
        format!("{} violations, first {:?}", rep.violations.len(), rep.violations[0])
    })?;
    ensure(rep.wall_time < Duration::from_secs(600), || {
        format!("took {:?}", rep.wall_time)
    })?;
    Ok(format!(
        "{} trees, both bounds, 0 violations, min margin {:?}, {:.2?}",
        rep.trees_checked, rep.min_margin, rep.wall_time
    ))
}

fn prototype_tightness() -> Result<String, String> {
    let mut checked = 0;
    for r in 2..=64 {
        for alpha in 0..4 {
            let n = 4 * r + alpha;
            let s = sigma(&prototype(n).map_err(|e| e.to_string())?.to_tree());
            let want_below = [2 * r, 2 * r + 1, 2 * r + 1, 2 * r + 2][alpha];
            ensure(s.sigma == n / 2 && s.below == want_below, || {
                format!(
                    "n={n}: sigma={} below={} want {} and {want_below}",
                    s.sigma,
                    s.below,
                    n / 2
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} prototypes, sigma = floor(n/2), m[0,d_n) = ceil(n/2)"
    ))
}

fn signs_of_values(t: &Tree, x: &Rational) -> Inertia {
    let mut out = Inertia::default();
    for d in diagonalize(t, &-x, 0).unwrap().values {
        match d.sign() {
            Sign::Negative => out.negative += 1,
            Sign::Zero => out.zero += 1,
            Sign::Positive => out.positive += 1,
        }
    }
    out
}

fn oracle_agreement() -> Result<String, String> {
    let seed = seed_from_env()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let t = Tree::random(n, &mut rng).map_err(|e| e.to_string())?;
        for x in [average_degree(n), q(1, 2), q(1, 1), q(2, 1), q(7, 3)] {
            let fast = inertia(&t, &x);
            let by_values = signs_of_values(&t, &x);
            let dense = dense_inertia(&t, &x);
            let sturm = sturm_inertia(&t, &x);
            ensure(fast == by_values && fast == dense && fast == sturm, || {
                format!(
                    "n={n} x={x} edges={:?}: {fast:?} {by_values:?} {dense:?} {sturm:?}",
                    t.edges()
                )
            })?;
            probes += 1;
        }
    }
    Ok(format!("1000 trees (seed {seed}), {probes} probes, 0 mismatches"))
}

fn pipeline_soundness() -> Result<String, String> {
    let rep = verify_pipeline(8, 13, 4).map_err(|e| e.to_string())?;
    let want: Vec<(usize, u64)> = (8..=13).zip(FREE_TREE_COUNTS[6..12].iter().copied()).collect();
    ensure(rep.per_order == want, || format!("orders {:?}", rep.per_order))?;
    ensure(rep.failures.is_empty(), || {
        format!("{} failures, first {:?}", rep.failures.len(), rep.failures[0])
    })?;
    Ok(format!(
        "{} trees, {} verified steps, 0 failures, {:.2?}",
        rep.trees, rep.steps, rep.wall_time
    ))
}

fn sorted(mut g: Vec<Gpp>) -> Vec<Gpp> {
    g.sort();
    g
}

fn golden_trace() -> Result<String, String> {
    let t = Tree::parse_edge_list(include_str!("../data/worked_example_n53.tree")).map_err(|e| e.to_string())?;
    let trace = transform(&t).map_err(|e| e.to_string())?;
    let want: Vec<Vec<usize>> = vec![
        vec![2, 3, 4, 6, 8],
        vec![3, 4, 4, 6, 8],
        vec![4, 4, 6, 8],
        vec![4, 6, 8, 9],
        vec![6, 7, 8, 9],
        vec![7, 8, 9, 17],
        vec![8, 9, 17],
        vec![9, 16, 17],
        vec![16, 17],
        vec![17, 20],
        vec![20, 27],
        vec![24, 27],
        vec![52],
    ];
    let got = trace.starlike_milestones();
    ensure(got == want, || format!("milestones {got:?}"))?;

    let single = trace.after_reductions();
    let u = single
        .sole_vertex()
        .ok_or("more than one skeleton vertex after reductions")?;
    let k1 = sorted(single.gpps(u).to_vec());
    let want_k1 = sorted(vec![Gpp::new(2, 8), Gpp::new(1, 4), Gpp::new(1, 12)]);
    ensure(k1 == want_k1, || format!("one-starlike state {single}"))?;

    let last_reduce = trace.steps.iter().rposition(|s| s.kind == StepKind::Reduce).unwrap();
    let tail: Vec<StepKind> = trace.steps[last_reduce + 1..]
        .iter()
        .map(|s| s.kind)
        .filter(|k| !k.is_marker())
        .collect();
    let want_tail = [
        StepKind::StarUp,
        StepKind::StarStar10,
        StepKind::Rebase,
        StepKind::StarUp,
    ];
    ensure(tail == want_tail, || format!("finishing steps {tail:?}"))?;

    let result = trace.result.to_string();
    ensure(result == "u + P_0*S_13 ⊕ P_0*S_13", || format!("final {result}"))?;
    ensure(
        trace.result.to_tree().is_isomorphic(&prototype(53).unwrap().to_tree()),
        || "final tree is not the prototype".into(),
    )?;
    let (s0, s1) = (sigma(&t).sigma, sigma(&trace.result.to_tree()).sigma);
    ensure(s1 == 26 && s0 <= s1, || format!("sigma {s0} -> {s1}"))?;
    Ok(format!(
        "{} milestones match, {} steps, sigma {s0} -> {s1}, final {result}",
        got.len(),
        trace.steps.len()
    ))
}

fn closed_forms() -> Result<String, String> {
    for r in 2..=10 {
        for alpha in [0, 2, 3] {
            let n = 4 * r + alpha;
            let (t, _) = prototype(n).map_err(|e| e.to_string())?.expand();
            let at_root = diagonalize(&t, &-average_degree(n), 0).unwrap().values[0].clone();
            let f = closed_form_f(alpha, r).map_err(|e| e.to_string())?;
            ensure(at_root == f, || format!("alpha={alpha} r={r}: {at_root} vs {f}"))?;
        }
    }
    let mut worst = 0f64;
    for r in 2..=20 {
        let got = float_spectrum(&prototype(4 * r + 1).unwrap().to_tree());
        let want = two_sun_spectrum(r);
        ensure(got.len() == want.len(), || format!("r={r}: length"))?;
        for (a, b) in got.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst < 1e-9, || format!("two-sun spectrum off by {worst:e}"))?;
    Ok(format!("27 exact centre values; two-sun spectra within {worst:.1e}"))
}

fn recurrences() -> Result<String, String> {
    let mut cases = 0;
    for n in 8..=200usize {
        let two_n = q(2, n as i64);
        let x1 = &two_n - &Rational::one();
        let x2 = &two_n - &x1.recip().unwrap();
        ensure(path_values(n, 2) == vec![x1.clone(), x2.clone()], || {
            format!("n={n}: path values")
        })?;
        let step = Rational::one() - x2.recip().unwrap();
        let b1 = |r: usize| &x1 + &(step.clone() * r as i64);
        let big_r = n / 4;
        for r in 0..=big_r {
            let b1r = b1(r);
            let b2r = &two_n - &b1r.recip().map_err(|e| format!("n={n} r={r}: b1 = 0 ({e})"))?;
            ensure(b1r < 0 && b2r > 0, || format!("n={n} r={r}: b1={b1r} b2={b2r}"))?;
            ensure(&b1(r + 1) - &b1r == step, || format!("n={n} r={r}: increment"))?;
            ensure(sun_values(n, r, 2) == vec![b1r, b2r], || {
                format!("n={n} r={r}: library values")
            })?;
            cases += 1;
        }
        // r0 from solving b1(r) = 0.
        let r0 = (-x1.clone()).checked_div(&step).unwrap();
        ensure(
            r0 == q(((n - 2) * (n * n + 2 * n - 4)) as i64, (4 * n * (n - 1)) as i64),
            || format!("n={n}: r0={r0}"),
        )?;
        ensure(Rational::from_int(big_r as i64) < r0, || {
            format!("n={n}: r0={r0} <= {big_r}")
        })?;
    }
    Ok(format!("{cases} (n, r) pairs, exact"))
}

fn performance() -> Result<String, String> {
    let seed = seed_from_env()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big = Tree::random(1_000_000, &mut rng).map_err(|e| e.to_string())?;
    let d = average_degree(big.n()).to_f64();
    let start = Instant::now();
    let fi = float_inertia(&big, d, 0).map_err(|e| e.to_string())?;
    let float_time = start.elapsed();
    ensure(fi.negative + fi.positive + fi.ambiguous == big.n(), || {
        format!("{fi:?}")
    })?;
    ensure(float_time < Duration::from_secs(1), || {
        format!("float took {float_time:?}")
    })?;

    let mid = Tree::random(10_000, &mut rng).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let ex = inertia(&mid, &average_degree(mid.n()));
    let exact_time = start.elapsed();
    ensure(ex.total() == mid.n(), || format!("{ex:?}"))?;
    ensure(exact_time < Duration::from_secs(10), || {
        format!("exact took {exact_time:?}")
    })?;
    Ok(format!(
        "float n=1e6 {float_time:.2?} ({} ambiguous), exact n=1e4 {exact_time:.2?}",
        fi.ambiguous
    ))
}

/// Written to the raw stderr handle so the lines show up even when the
/// harness captures output.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let checks: [(&str, Check); 8] = [
        ("1 bounds on all trees n <= 16", exhaustive_bounds),
        ("2 prototype tightness r = 2..64", prototype_tightness),
        ("3 diagonal / dense / Sturm agreement", oracle_agreement),
        ("4 reduction pipeline n = 8..13", pipeline_soundness),
        ("5 worked example n = 53", golden_trace),
        ("6 closed forms and two-sun spectrum", closed_forms),
        ("7 pendant recurrences n = 8..200", recurrences),
        ("8 float 1e6 < 1s, exact 1e4 < 10s", performance),
    ];
    let mut failed = Vec::new();
    for (name, check) in checks {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => report(&format!("PASS criterion {name}: {detail}")),
            Err(why) => {
                report(&format!("FAIL criterion {name}: {why}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
