//! Count Laplacian eigenvalues of a few trees on either side of the average
//! degree, and in arbitrary intervals.
//!
//! ```text
//! cargo run --example count_eigenvalues
//! cargo run --example count_eigenvalues -- path/to/tree.txt
//! ```

use lapdist::diagonalize::{count_interval, diagonalize};
use lapdist::{sigma, Rational, Tree};

fn report(name: &str, t: &Tree) {
    let s = sigma(t);
    println!(
        "{name:<12} n={:<3} d_n={:<6} below={:<3} above={:<3} ceil(n/2)={}",
        s.n,
        s.average_degree.to_string(),
        s.below,
        s.sigma,
        s.n.div_ceil(2)
    );
}

fn main() {
    if let Some(path) = std::env::args().nth(1) {
        let text = std::fs::read_to_string(&path).expect("readable file");
        match Tree::parse_edge_list(&text) {
            Ok(t) => report(&path, &t),
            Err(e) => eprintln!("{path}: {e}"),
        }
        return;
    }

    for n in [3, 6, 11] {
        report(&format!("path P_{n}"), &Tree::path(n));
        report(&format!("star K_1,{}", n - 1), &Tree::star(n));
    }

    // The diagonal itself: K_1,4 rooted at its centre, shifted by -d_5 = -8/5.
    let star = Tree::star(5);
    let d = diagonalize(&star, &-star.average_degree(), 0).unwrap();
    let vals: Vec<String> = d.values.iter().map(|v| v.to_string()).collect();
    println!("\nK_1,4 diagonal at -8/5: {}", vals.join(", "));

    // P_4 has eigenvalues 2 - sqrt 2, 2, 2 + sqrt 2 besides 0.
    let p4 = Tree::path(4);
    let two = Rational::from_int(2);
    let zero = Rational::zero();
    let four = Rational::from_int(4);
    println!(
        "P_4: m[0,2) = {}",
        count_interval(&p4, &zero, &two, true, false).unwrap()
    );
    println!("P_4: m[2,2] = {}", count_interval(&p4, &two, &two, true, true).unwrap());
    println!(
        "P_4: m(2,4] = {}",
        count_interval(&p4, &two, &four, false, true).unwrap()
    );
}
