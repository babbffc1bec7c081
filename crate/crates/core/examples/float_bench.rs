//! Time floating-point and exact inertia on large random trees.
//!
//! ```text
//! cargo run --release --example float_bench -- 1000000
//! ```

use std::time::Instant;

use lapdist::diagonalize::float_inertia;
use lapdist::{inertia, Tree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let n: usize = std::env::args().nth(1).map_or(1_000_000, |s| s.parse().expect("order"));
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let t = Tree::random(n, &mut rng).unwrap();
    let d = t.average_degree();
    let start = Instant::now();
    let f = float_inertia(&t, d.to_f64(), 0).unwrap();
    println!(
        "float n={n}: below {} above {} ambiguous {} in {:.2?}",
        f.negative,
        f.positive,
        f.ambiguous,
        start.elapsed()
    );

    for m in [1_000, 10_000, 50_000] {
        let t = Tree::random(m, &mut rng).unwrap();
        let start = Instant::now();
        let i = inertia(&t, &t.average_degree());
        println!(
            "exact n={m}: below {} above {} in {:.2?}",
            i.negative,
            i.positive,
            start.elapsed()
        );
    }
}
