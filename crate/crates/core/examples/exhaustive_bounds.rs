//! Check `m[0, d_n) >= ceil(n/2)` and `m[0, 2) >= ceil(n/2)` on every tree up
//! to a given order.
//!
//! ```text
//! cargo run --release --example exhaustive_bounds -- 18 8
//! ```

use lapdist::enumerate::verify_bounds;

fn main() {
    let mut args = std::env::args().skip(1);
    let n_max: usize = args.next().map_or(14, |s| s.parse().expect("order"));
    let jobs: usize = args.next().map_or(4, |s| s.parse().expect("worker count"));

    let rep = match verify_bounds(n_max, jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    for (n, c) in &rep.per_order {
        println!("n={n:<3} {c:>8} trees");
    }
    println!(
        "{} trees in {:.2?}, {} violations, tightest margin {:?}",
        rep.trees_checked,
        rep.wall_time,
        rep.violations.len(),
        rep.min_margin
    );
    for v in &rep.violations {
        println!("{v:?}");
    }
}
