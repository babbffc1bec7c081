//! Walk all unlabelled trees of one order and tabulate how many eigenvalues
//! each has above the average degree.
//!
//! ```text
//! cargo run --release --example enumerate_trees -- 12 4
//! ```

use lapdist::enumerate::{free_trees, sigma_histogram};
use lapdist::sigma;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(7, |s| s.parse().expect("order"));
    let jobs: usize = args.next().map_or(2, |s| s.parse().expect("worker count"));

    if n <= 7 {
        for (i, t) in free_trees(n).unwrap().enumerate() {
            let s = sigma(&t);
            println!(
                "#{i:<3} max degree {} sigma {} edges {:?}",
                t.max_degree(),
                s.sigma,
                t.edges()
            );
        }
    }
    let hist = sigma_histogram(n, jobs).unwrap_or_else(|e| panic!("{e}"));
    println!("n={n}: {} trees", hist.values().sum::<u64>());
    for (s, c) in hist {
        println!("  sigma={s:<3} {c}");
    }
}
