//! Independent cross-checks for the tree diagonalization: dense exact
//! elimination, Sturm counting on the characteristic polynomial, and a float
//! Jacobi eigensolver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diagonalize::Inertia;
use crate::numerics::{Rational, Sign};
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("Sturm count needs lo < hi, got lo={lo} hi={hi}")]
    EmptyInterval { lo: Box<Rational>, hi: Box<Rational> },
}

/// Dense integer Laplacian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn laplacian(tree: &Tree) -> IntMatrix {
        let n = tree.n();
        let mut data = vec![0i64; n * n];
        for v in 0..n {
            data[v * n + v] = tree.degree(v) as i64;
        }
        for &(u, v) in tree.edges() {
            data[u * n + v] = -1;
            data[v * n + u] = -1;
        }
        IntMatrix { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }
}

/// Inertia of `L - xI` by exact symmetric elimination, using 2x2 pivots when
/// every remaining diagonal entry vanishes.
pub fn dense_inertia(tree: &Tree, x: &Rational) -> Inertia {
    let l = IntMatrix::laplacian(tree);
    let n = l.n;
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = Rational::from_int(l.get(i, j));
                    if i == j {
                        e - x
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Inertia::default();

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) {
            let p = active.swap_remove(pos);
            let piv = m[p][p].clone();
            match piv.sign() {
                Sign::Negative => out.negative += 1,
                _ => out.positive += 1,
            }
            for &i in &active {
                if m[i][p].is_zero() {
                    continue;
                }
                let f = &m[i][p] / &piv;
                for &j in &active {
                    if !m[p][j].is_zero() {
                        let delta = &f * &m[p][j];
                        m[i][j] -= &delta;
                    }
                }
            }
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(a, &i)| active[a + 1..].iter().find(|&&j| !m[i][j].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else {
            out.zero += active.len();
            break;
        };
        // The block [[0, b], [b, 0]] has one eigenvalue of each sign.
        out.negative += 1;
        out.positive += 1;
        let b = m[i][j].clone();
        active.retain(|&k| k != i && k != j);
        for &k in &active {
            for &l in &active {
                let t = &(&m[k][i] * &m[j][l]) + &(&m[k][j] * &m[i][l]);
                if !t.is_zero() {
                    let delta = &t / &b;
                    m[k][l] -= &delta;
                }
            }
        }
    }
    out
}

/// Integer polynomial, coefficients from the constant term up.
pub type IntPoly = Vec<BigInt>;

fn ipoly_trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn ipoly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ipoly_trim(&mut out);
    out
}

fn ipoly_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    ipoly_trim(&mut out);
    out
}

/// Exact quotient of `a` by a monic `d`.
fn ipoly_div_monic(a: &IntPoly, d: &IntPoly) -> IntPoly {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        debug_assert!(a.iter().all(Zero::is_zero));
        return vec![BigInt::zero()];
    }
    let mut rem = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in d.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    ipoly_trim(&mut q);
    q
}

/// `det(xI - L)` by fraction-free elimination over `Z[x]`. Every leading
/// principal minor of `xI - L` is monic, so each pivot is nonzero and the
/// divisions are exact.
pub fn char_poly(tree: &Tree) -> IntPoly {
    let l = IntMatrix::laplacian(tree);
    let n = l.n;
    let mut m: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = BigInt::from(-l.get(i, j));
                    if i == j {
                        vec![c, BigInt::one()]
                    } else {
                        vec![c]
                    }
                })
                .collect()
        })
        .collect();
    let mut prev: IntPoly = vec![BigInt::one()];
    for k in 0..n.saturating_sub(1) {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ipoly_sub(&ipoly_mul(&m[k][k], &m[i][j]), &ipoly_mul(&m[i][k], &m[k][j]));
                m[i][j] = ipoly_div_monic(&num, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone()
}

/// Rational polynomial, coefficients from the constant term up; the zero
/// polynomial is empty.
type QPoly = Vec<Rational>;

fn qtrim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
    p
}

fn qderiv(p: &QPoly) -> QPoly {
    qtrim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rational::from_int(i as i64))
            .collect(),
    )
}

fn qdivmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![Rational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            rem[k + i] -= &t;
        }
        q[k] = c;
    }
    rem.truncate(db);
    (qtrim(q), qtrim(rem))
}

fn qmonic(p: QPoly) -> QPoly {
    let lead = p.last().expect("nonzero polynomial").clone();
    p.iter().map(|c| c / &lead).collect()
}

fn qgcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = qdivmod(&a, &b);
        a = b;
        b = r;
    }
    qmonic(a)
}

fn qeval(p: &QPoly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| &(acc * x) + c)
}

/// Yun's algorithm: `p = lead * prod a_i^i` with each `a_i` square-free.
fn square_free_factors(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    let dp = qderiv(p);
    if dp.is_empty() {
        return out;
    }
    let a0 = qgcd(p, &dp);
    let mut b = qdivmod(p, &a0).0;
    let mut c = qdivmod(&dp, &a0).0;
    let mut d = qtrim(
        (0..c.len().max(b.len()))
            .map(|i| {
                let ci = c.get(i).cloned().unwrap_or_default();
                let bd = qderiv(&b).get(i).cloned().unwrap_or_default();
                ci - &bd
            })
            .collect(),
    );
    let mut i = 1;
    while b.len() > 1 {
        let a = qgcd(&b, &d);
        b = qdivmod(&b, &a).0;
        c = qdivmod(&d, &a).0;
        let db = qderiv(&b);
        d = qtrim(
            (0..c.len().max(db.len()))
                .map(|k| c.get(k).cloned().unwrap_or_default() - &db.get(k).cloned().unwrap_or_default())
                .collect(),
        );
        if a.len() > 1 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), qderiv(p)];
    loop {
        let k = chain.len();
        if chain[k - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = qdivmod(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &Rational) -> usize {
    let signs: Vec<Sign> = chain
        .iter()
        .map(|p| qeval(p, x).sign())
        .filter(|s| *s != Sign::Zero)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Eigenvalues of `L(T)` in `(lo, hi]`, counted with multiplicity.
pub fn sturm_count(tree: &Tree, lo: &Rational, hi: &Rational) -> Result<usize, OracleError> {
    if lo >= hi {
        return Err(OracleError::EmptyInterval {
            lo: Box::new(lo.clone()),
            hi: Box::new(hi.clone()),
        });
    }
    let p: QPoly = char_poly(tree).into_iter().map(Rational::from).collect();
    let mut total = 0;
    for (factor, mult) in square_free_factors(&p) {
        let chain = sturm_chain(&factor);
        total += mult * (sign_variations(&chain, lo) - sign_variations(&chain, hi));
    }
    Ok(total)
}

/// Multiplicity of `x` as a root of the characteristic polynomial.
pub fn root_multiplicity(tree: &Tree, x: &Rational) -> usize {
    let mut p: QPoly = char_poly(tree).into_iter().map(Rational::from).collect();
    let lin = vec![-x, Rational::one()];
    let mut k = 0;
    loop {
        let (q, r) = qdivmod(&p, &lin);
        if !r.is_empty() {
            return k;
        }
        p = q;
        k += 1;
    }
}

/// Inertia of `L - xI` from the characteristic polynomial alone.
pub fn sturm_inertia(tree: &Tree, x: &Rational) -> Inertia {
    let n = tree.n();
    let below_or_at = sturm_count(tree, &Rational::from_int(-1), x).expect("x >= 0 > -1");
    let zero = root_multiplicity(tree, x);
    Inertia {
        negative: below_or_at - zero,
        zero,
        positive: n - below_or_at,
    }
}

/// Sorted Laplacian spectrum by cyclic Jacobi rotations.
pub fn float_spectrum(tree: &Tree) -> Vec<f64> {
    let l = IntMatrix::laplacian(tree);
    let n = l.n;
    let mut a: Vec<f64> = l.data.iter().map(|&v| v as f64).collect();
    let scale: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-12 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Closed-form spectrum of the two-sun prototype `P_0*S_r ⊕ P_0*S_r` on
/// `4r + 1` vertices, sorted.
pub fn two_sun_spectrum(r: usize) -> Vec<f64> {
    let rf = r as f64;
    let s5 = 5f64.sqrt();
    let (theta, theta_bar) = ((3.0 - s5) / 2.0, (3.0 + s5) / 2.0);
    let b = 2.0 * rf + 3.0;
    let disc = (b * b - 4.0 * (4.0 * rf + 1.0)).sqrt();
    let (l1, l2) = ((b - disc) / 2.0, (b + disc) / 2.0);
    let mut out = vec![0.0];
    out.extend(std::iter::repeat_n(theta, 2 * r - 1));
    out.push(l1);
    out.extend(std::iter::repeat_n(theta_bar, 2 * r - 1));
    out.push(l2);
    out.sort_by(f64::total_cmp);
    out
}

/// Gcd of the integer content; used to sanity-check characteristic
/// polynomials in tests.
pub fn content(p: &IntPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).abs()
}
