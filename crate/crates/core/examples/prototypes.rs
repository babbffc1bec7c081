//! The four extremal shapes, their eigenvalue counts, the exact value at
//! their centre, and DOT output for one of them.
//!
//! ```text
//! cargo run --example prototypes
//! cargo run --example prototypes -- 13 | dot -Tsvg > t13.svg
//! ```

use lapdist::diagonalize::diagonalize;
use lapdist::dot::expanded_to_dot;
use lapdist::numerics::average_degree;
use lapdist::sigma;
use lapdist::transforms::{closed_form_f, prototype, zero_index_bound};

fn main() {
    if let Some(n) = std::env::args().nth(1) {
        let n: usize = n.parse().expect("order");
        let rep = prototype(n).unwrap_or_else(|e| panic!("{e}"));
        print!("{}", expanded_to_dot(&rep, &format!("T{n}")));
        return;
    }

    println!(
        "{:<4} {:<28} {:>5} {:>5} {:>10}",
        "n", "shape", "sigma", "below", "r0 floor"
    );
    for n in 8..=23 {
        let rep = prototype(n).unwrap();
        let s = sigma(&rep.to_tree());
        println!(
            "{n:<4} {:<28} {:>5} {:>5} {:>10}",
            rep.to_string(),
            s.sigma,
            s.below,
            zero_index_bound(n)
        );
    }

    println!("\ncentre value at -d_n, from the closed form and by elimination:");
    for r in 2..=5 {
        for alpha in [0, 2, 3] {
            let n = 4 * r + alpha;
            let (t, _) = prototype(n).unwrap().expand();
            let direct = diagonalize(&t, &-average_degree(n), 0).unwrap().values[0].clone();
            let f = closed_form_f(alpha, r).unwrap();
            println!(
                "  r={r} alpha={alpha}: {f} ({})",
                if f == direct { "agrees" } else { "DIFFERS" }
            );
        }
    }
}
