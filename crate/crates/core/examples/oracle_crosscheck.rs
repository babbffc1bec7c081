//! Compare tree diagonalization with dense elimination, Sturm sequences on
//! the characteristic polynomial, and a floating-point eigensolver.
//!
//! ```text
//! LAPDIST_SEED=7 cargo run --example oracle_crosscheck
//! ```

use lapdist::cli::seed_from_env;
use lapdist::oracle::{char_poly, dense_inertia, float_spectrum, sturm_inertia};
use lapdist::{inertia, Rational, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = seed_from_env().unwrap_or_else(|e| panic!("{e}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let t = Tree::path(4);
    println!("char poly of P_4: {:?}", char_poly(&t));
    println!("spectrum of P_4: {:?}", float_spectrum(&t));

    let mut mismatches = 0;
    let trials = 200;
    for _ in 0..trials {
        let n = rng.gen_range(2..=12);
        let t = Tree::random(n, &mut rng).unwrap();
        let x = Rational::new(rng.gen_range(0..=3 * n as i64), rng.gen_range(1..=4)).unwrap();
        let a = inertia(&t, &x);
        let b = dense_inertia(&t, &x);
        let c = sturm_inertia(&t, &x);
        let spectrum = float_spectrum(&t);
        let below = spectrum.iter().filter(|&&l| l < x.to_f64() - 1e-9).count();
        if a != b || a != c || a.negative != below {
            mismatches += 1;
            println!("n={n} x={x}: {a:?} {b:?} {c:?} float below {below}");
        }
    }
    println!("seed {seed}: {trials} random probes, {mismatches} mismatches");
}
