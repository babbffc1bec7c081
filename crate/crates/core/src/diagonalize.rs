//! Linear-time diagonalization of `L(T) + xI` for a tree `T`.
//!
//! The result is congruent to `L(T) + xI`, so by Sylvester's law of inertia the
//! signs of the diagonal count Laplacian eigenvalues on either side of `-x`.

use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::{Rational, Sign};
use crate::tree::{Tree, VertexId};

/// Threshold below which a floating-point diagonal value is treated as zero.
pub const FLOAT_TAU: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagError {
    #[error("root {root} out of range for n={n}")]
    BadRoot { root: VertexId, n: usize },
    #[error("interval is inverted: lo={lo} > hi={hi}")]
    InvertedInterval { lo: Box<Rational>, hi: Box<Rational> },
    #[error("interval is inverted or not finite: lo={lo}, hi={hi}")]
    BadFloatInterval { lo: f64, hi: f64 },
}

/// Scalars the diagonalization can run over.
pub trait DiagScalar: Clone {
    fn from_count(k: usize) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// Only called on values that `is_branch_zero` rejected.
    fn recip(&self) -> Self;
    /// Whether the branching rule should treat this value as zero.
    fn is_branch_zero(&self) -> bool;
    fn is_exact_zero(&self) -> bool;
    fn two() -> Self;
    fn minus_half() -> Self;
}

impl DiagScalar for Rational {
    fn from_count(k: usize) -> Self {
        Rational::from_int(k as i64)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn recip(&self) -> Self {
        Rational::recip(self).expect("nonzero by construction")
    }
    fn is_branch_zero(&self) -> bool {
        self.is_zero()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn two() -> Self {
        Rational::from_int(2)
    }
    fn minus_half() -> Self {
        Rational::new(-1, 2).expect("nonzero denominator")
    }
}

impl DiagScalar for f64 {
    fn from_count(k: usize) -> Self {
        k as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn is_branch_zero(&self) -> bool {
        self.abs() < FLOAT_TAU
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn two() -> Self {
        2.0
    }
    fn minus_half() -> Self {
        -0.5
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagResult<S> {
    pub root: VertexId,
    /// Final diagonal value per vertex.
    pub values: Vec<S>,
    /// `(child, parent)` edges cut by the zero-child rule.
    pub detached: Vec<(VertexId, VertexId)>,
    /// Branching decisions taken on a value that was small but not exactly zero.
    pub near_zero_branches: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inertia {
    /// Eigenvalues strictly below the probe point.
    pub negative: usize,
    /// Multiplicity of the probe point.
    pub zero: usize,
    /// Eigenvalues strictly above the probe point.
    pub positive: usize,
}

impl Inertia {
    pub fn total(&self) -> usize {
        self.negative + self.zero + self.positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FloatInertia {
    pub negative: usize,
    pub positive: usize,
    /// Diagonal values within `FLOAT_TAU` of zero.
    pub ambiguous: usize,
    pub near_zero_branches: usize,
}

impl FloatInertia {
    pub fn is_ambiguous(&self) -> bool {
        self.ambiguous > 0 || self.near_zero_branches > 0
    }
}

/// Breadth-first order from `root` reversed (children before parents) and the
/// parent array, `usize::MAX` marking the root.
fn rooted_order(tree: &Tree, root: VertexId) -> (Vec<VertexId>, Vec<VertexId>) {
    let n = tree.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[root] = true;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in tree.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                order.push(w);
            }
        }
    }
    order.reverse();
    (order, parent)
}

/// Diagonalize `L(T) + xI` starting from `d(v) = deg(v) + x`.
pub fn diagonalize<S: DiagScalar>(tree: &Tree, x: &S, root: VertexId) -> Result<DiagResult<S>, DiagError> {
    let n = tree.n();
    if root >= n {
        return Err(DiagError::BadRoot { root, n });
    }
    let (order, parent) = rooted_order(tree, root);
    let mut values: Vec<S> = (0..n).map(|v| S::from_count(tree.degree(v)).add(x)).collect();
    let mut child_sum: Vec<Option<S>> = vec![None; n];
    let mut zero_child: Vec<Option<VertexId>> = vec![None; n];
    let mut detached = Vec::new();
    let mut near_zero_branches = 0;

    for &v in &order {
        let mut cut = false;
        if let Some(c) = zero_child[v] {
            values[c] = S::two();
            values[v] = S::minus_half();
            cut = parent[v] != usize::MAX;
        } else if let Some(sum) = child_sum[v].take() {
            values[v] = values[v].sub(&sum);
        }
        let p = parent[v];
        if p == usize::MAX {
            continue;
        }
        if cut {
            detached.push((v, p));
            continue;
        }
        if values[v].is_branch_zero() {
            if !values[v].is_exact_zero() {
                near_zero_branches += 1;
            }
            zero_child[p] = Some(zero_child[p].map_or(v, |c: VertexId| c.min(v)));
        } else {
            let inv = values[v].recip();
            child_sum[p] = Some(match child_sum[p].take() {
                Some(s) => s.add(&inv),
                None => inv,
            });
        }
    }
    Ok(DiagResult {
        root,
        values,
        detached,
        near_zero_branches,
    })
}

/// Signs of the diagonal of `L(T) - xI`: eigenvalues below, at and above `x`.
///
/// Same elimination as [`diagonalize`], run fraction-free on the integer
/// matrix `q L(T) - p I` for `x = p/q`. Each diagonal value is kept as an
/// unreduced pair `a / b`, which skips the gcd work that dominates the
/// rational version on large trees.
pub fn inertia_rooted(tree: &Tree, x: &Rational, root: VertexId) -> Result<Inertia, DiagError> {
    let n = tree.n();
    if root >= n {
        return Err(DiagError::BadRoot { root, n });
    }
    let p = x.numer();
    let q = x.denom();
    let q2 = q * q;
    let (order, parent) = rooted_order(tree, root);
    let mut num: Vec<BigInt> = (0..n).map(|v| q * BigInt::from(tree.degree(v)) - p).collect();
    let mut den: Vec<BigInt> = vec![BigInt::one(); n];
    // Fixed signs for vertices settled by the zero-child rule.
    let mut forced: Vec<Option<Sign>> = vec![None; n];
    let mut zero_child: Vec<Option<VertexId>> = vec![None; n];

    for &v in &order {
        let mut cut = false;
        if let Some(c) = zero_child[v] {
            forced[c] = Some(Sign::Positive);
            forced[v] = Some(Sign::Negative);
            cut = parent[v] != usize::MAX;
        }
        let pv = parent[v];
        if pv == usize::MAX || cut {
            continue;
        }
        if num[v].is_zero() {
            zero_child[pv] = Some(zero_child[pv].map_or(v, |c: VertexId| c.min(v)));
        } else if zero_child[pv].is_none() {
            // d(p) -= q^2 / d(v), i.e. a_p/b_p - q^2 b_v/a_v.
            let (a_v, b_v) = (std::mem::take(&mut num[v]), std::mem::take(&mut den[v]));
            let t = &q2 * &b_v * &den[pv];
            num[pv] = &num[pv] * &a_v - t;
            den[pv] = &den[pv] * &a_v;
            num[v] = a_v;
            den[v] = b_v;
        }
    }
    let mut out = Inertia::default();
    for v in 0..n {
        let sign = forced[v].unwrap_or_else(|| match (num[v].sign(), den[v].sign()) {
            (BigSign::NoSign, _) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        });
        match sign {
            Sign::Negative => out.negative += 1,
            Sign::Zero => out.zero += 1,
            Sign::Positive => out.positive += 1,
        }
    }
    Ok(out)
}

pub fn inertia(tree: &Tree, x: &Rational) -> Inertia {
    inertia_rooted(tree, x, 0).expect("vertex 0 exists")
}

/// Floating-point counterpart of [`inertia`]; values within `FLOAT_TAU` of
/// zero are reported as ambiguous instead of being given a sign.
pub fn float_inertia(tree: &Tree, x: f64, root: VertexId) -> Result<FloatInertia, DiagError> {
    let res = diagonalize(tree, &-x, root)?;
    let mut out = FloatInertia {
        near_zero_branches: res.near_zero_branches,
        ..FloatInertia::default()
    };
    for &d in &res.values {
        if d.abs() < FLOAT_TAU {
            out.ambiguous += 1;
        } else if d < 0.0 {
            out.negative += 1;
        } else {
            out.positive += 1;
        }
    }
    Ok(out)
}

/// Number of Laplacian eigenvalues in the interval from `lo` to `hi`, each end
/// open or closed as requested.
pub fn count_interval(
    tree: &Tree,
    lo: &Rational,
    hi: &Rational,
    lo_closed: bool,
    hi_closed: bool,
) -> Result<usize, DiagError> {
    if lo > hi {
        return Err(DiagError::InvertedInterval {
            lo: Box::new(lo.clone()),
            hi: Box::new(hi.clone()),
        });
    }
    let at_lo = inertia(tree, lo);
    if lo == hi {
        return Ok(if lo_closed && hi_closed { at_lo.zero } else { 0 });
    }
    let at_hi = inertia(tree, hi);
    // Count of eigenvalues left of each endpoint, including it when closed.
    let below_hi = at_hi.negative + if hi_closed { at_hi.zero } else { 0 };
    let below_lo = at_lo.negative + if lo_closed { 0 } else { at_lo.zero };
    Ok(below_hi - below_lo)
}

/// Float interval count. `count` is `None` when either endpoint produced a
/// value within `FLOAT_TAU` of zero; the exact count should be used instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloatCount {
    pub count: Option<usize>,
    pub ambiguous: usize,
}

/// Floating-point counterpart of [`count_interval`]. Away from eigenvalues
/// the endpoint convention does not matter, so only `[lo, hi)` is computed.
pub fn float_count_interval(tree: &Tree, lo: f64, hi: f64) -> Result<FloatCount, DiagError> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(DiagError::BadFloatInterval { lo, hi });
    }
    let a = float_inertia(tree, lo, 0)?;
    let b = float_inertia(tree, hi, 0)?;
    let ambiguous = a.ambiguous + b.ambiguous;
    let count = (!a.is_ambiguous() && !b.is_ambiguous()).then(|| b.negative - a.negative);
    Ok(FloatCount { count, ambiguous })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    pub n: usize,
    pub average_degree: Rational,
    /// Eigenvalues in `[0, d_n)`.
    pub below: usize,
    /// Eigenvalues strictly greater than `d_n`.
    pub sigma: usize,
}

pub fn sigma(tree: &Tree) -> SigmaReport {
    let d = tree.average_degree();
    let i = inertia(tree, &d);
    SigmaReport {
        n: tree.n(),
        average_degree: d,
        below: i.negative,
        sigma: i.positive,
    }
}
