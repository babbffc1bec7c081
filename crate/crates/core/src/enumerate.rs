//! Exhaustive generation of unlabelled trees and the checks run over them.
//!
//! Free trees come from the Wright–Richmond–Odlyzko–McKay successor on level
//! sequences, which visits each isomorphism class exactly once in constant
//! amortized time.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagonalize::{inertia, sigma};
use crate::numerics::Rational;
use crate::transforms::{transform_with, Options, MIN_ORDER};
use crate::tree::Tree;

/// Largest order the exhaustive generator accepts.
pub const MAX_ORDER: usize = 20;

const BATCH: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("order {n} outside {min}..={MAX_ORDER}")]
    OrderOutOfRange { n: usize, min: usize },
    #[error("need at least one worker")]
    NoWorkers,
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// Iterator over one representative of every free tree on `n` vertices.
#[derive(Debug, Clone)]
pub struct FreeTrees {
    n: usize,
    layout: Option<Vec<usize>>,
    small: Option<Tree>,
}

pub fn free_trees(n: usize) -> Result<FreeTrees, EnumerateError> {
    if n == 0 || n > MAX_ORDER {
        return Err(EnumerateError::OrderOutOfRange { n, min: 1 });
    }
    if n <= 2 {
        return Ok(FreeTrees {
            n,
            layout: None,
            small: Some(Tree::path(n)),
        });
    }
    let layout = (0..=n / 2).chain(1..n.div_ceil(2)).collect();
    Ok(FreeTrees {
        n,
        layout: Some(layout),
        small: None,
    })
}

impl Iterator for FreeTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if let Some(t) = self.small.take() {
            return Some(t);
        }
        let cur = self.layout.take()?;
        let valid = next_tree(cur)?;
        let tree = layout_to_tree(&valid);
        self.layout = next_rooted_tree(&valid, None);
        debug_assert_eq!(tree.n(), self.n);
        Some(tree)
    }
}

fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut out = pred.to_vec();
    for i in p..out.len() {
        out[i] = out[i - p + q];
    }
    Some(out)
}

/// The subtree under the root's first child (levels shifted down by one) and
/// the rest of the tree.
fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l == 1)
        .nth(1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|l| l - 1).collect();
    let rest = std::iter::once(0).chain(layout[m..].iter().copied()).collect();
    (left, rest)
}

/// Advance to the next layout that is the canonical one for a free tree.
fn next_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&candidate);
    let lh = left.iter().max().copied().unwrap_or(0);
    let rh = rest.iter().max().copied().unwrap_or(0);
    let mut valid = rh >= lh;
    if valid && rh == lh && (left.len() > rest.len() || (left.len() == rest.len() && left > rest)) {
        valid = false;
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted_tree(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&next);
        let h = new_left.iter().max().copied().unwrap_or(0);
        let len = next.len();
        for (k, slot) in next[len - (h + 1)..].iter_mut().enumerate() {
            *slot = k + 1;
        }
    }
    Some(next)
}

fn layout_to_tree(layout: &[usize]) -> Tree {
    let mut edges = Vec::with_capacity(layout.len() - 1);
    let mut stack: Vec<usize> = Vec::new();
    for (i, &level) in layout.iter().enumerate() {
        while let Some(&j) = stack.last() {
            if layout[j] >= level {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&j) = stack.last() {
            edges.push((i, j));
        }
        stack.push(i);
    }
    Tree::from_edge_list(layout.len(), &edges).expect("level sequence encodes a tree")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bound {
    /// Eigenvalues in `[0, d_n)`.
    AverageDegree,
    /// Eigenvalues in `[0, 2)`.
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub bound: Bound,
    pub count: usize,
    pub required: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n_lo: usize,
    pub n_hi: usize,
    pub trees_checked: u64,
    pub per_order: Vec<(usize, u64)>,
    pub violations: Vec<Violation>,
    /// Smallest `count - ⌈n/2⌉` seen over both bounds.
    pub min_margin: Option<i64>,
    pub wall_time: Duration,
}

impl VerifyReport {
    fn empty(n: usize) -> VerifyReport {
        VerifyReport {
            n_lo: n,
            n_hi: n,
            trees_checked: 0,
            per_order: Vec::new(),
            violations: Vec::new(),
            min_margin: None,
            wall_time: Duration::ZERO,
        }
    }

    /// Combine two partial reports; associative, with `empty` as identity up
    /// to the order range.
    pub fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.n_lo = self.n_lo.min(other.n_lo);
        self.n_hi = self.n_hi.max(other.n_hi);
        self.trees_checked += other.trees_checked;
        for (n, c) in other.per_order {
            match self.per_order.iter_mut().find(|(m, _)| *m == n) {
                Some(slot) => slot.1 += c,
                None => self.per_order.push((n, c)),
            }
        }
        self.per_order.sort_unstable();
        self.violations.extend(other.violations);
        self.violations.sort_by(|a, b| (a.n, &a.edges).cmp(&(b.n, &b.edges)));
        self.min_margin = match (self.min_margin, other.min_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.wall_time = self.wall_time.max(other.wall_time);
        self
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_tree(tree: &Tree) -> VerifyReport {
    let n = tree.n();
    let required = n.div_ceil(2);
    let mut rep = VerifyReport::empty(n);
    rep.trees_checked = 1;
    rep.per_order.push((n, 1));
    let probes = [
        (Bound::AverageDegree, tree.average_degree()),
        (Bound::Two, Rational::from_int(2)),
    ];
    for (bound, x) in probes {
        let count = inertia(tree, &x).negative;
        let margin = count as i64 - required as i64;
        rep.min_margin = Some(rep.min_margin.map_or(margin, |m| m.min(margin)));
        if count < required {
            rep.violations.push(Violation {
                n,
                bound,
                count,
                required,
                edges: tree.edges().to_vec(),
            });
        }
    }
    rep
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, EnumerateError> {
    if workers == 0 {
        return Err(EnumerateError::NoWorkers);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| EnumerateError::Pool(e.to_string()))
}

/// Check `m[0, d_n) >= ⌈n/2⌉` and `m[0, 2) >= ⌈n/2⌉` on every tree of order
/// `2..=n_max`. At `n = 1` the average degree is 0 and `[0, d_1)` is empty.
pub fn verify_bounds(n_max: usize, workers: usize) -> Result<VerifyReport, EnumerateError> {
    verify_bounds_range(2, n_max, workers)
}

pub fn verify_bounds_range(n_lo: usize, n_hi: usize, workers: usize) -> Result<VerifyReport, EnumerateError> {
    if n_lo < 2 {
        return Err(EnumerateError::OrderOutOfRange { n: n_lo, min: 2 });
    }
    if n_hi > MAX_ORDER {
        return Err(EnumerateError::OrderOutOfRange { n: n_hi, min: 2 });
    }
    let start = Instant::now();
    let pool = pool(workers)?;
    let mut total = VerifyReport::empty(n_lo);
    for n in n_lo..=n_hi {
        let trees: Vec<Tree> = free_trees(n)?.collect();
        let part = pool.install(|| {
            trees
                .par_chunks(BATCH)
                .map(|batch| {
                    batch
                        .iter()
                        .map(check_tree)
                        .fold(VerifyReport::empty(n), VerifyReport::merge)
                })
                .reduce(|| VerifyReport::empty(n), VerifyReport::merge)
        });
        total = total.merge(part);
    }
    total.n_hi = total.n_hi.max(n_hi);
    total.wall_time = start.elapsed();
    Ok(total)
}

/// Number of trees of order `n` with each value of sigma.
pub fn sigma_histogram(n: usize, workers: usize) -> Result<BTreeMap<usize, u64>, EnumerateError> {
    let pool = pool(workers)?;
    let trees: Vec<Tree> = free_trees(n)?.collect();
    Ok(pool.install(|| {
        trees
            .par_chunks(BATCH)
            .map(|batch| {
                let mut h = BTreeMap::new();
                for t in batch {
                    *h.entry(sigma(t).sigma).or_insert(0u64) += 1;
                }
                h
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineFailure {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub trees: u64,
    pub per_order: Vec<(usize, u64)>,
    pub steps: u64,
    pub failures: Vec<PipelineFailure>,
    pub wall_time: Duration,
}

/// Run the verified reduction on every tree of order `n_lo..=n_hi`.
pub fn verify_pipeline(n_lo: usize, n_hi: usize, workers: usize) -> Result<PipelineReport, EnumerateError> {
    if n_lo < MIN_ORDER {
        return Err(EnumerateError::OrderOutOfRange {
            n: n_lo,
            min: MIN_ORDER,
        });
    }
    if n_hi > MAX_ORDER {
        return Err(EnumerateError::OrderOutOfRange {
            n: n_hi,
            min: MIN_ORDER,
        });
    }
    let start = Instant::now();
    let pool = pool(workers)?;
    let mut report = PipelineReport {
        trees: 0,
        per_order: Vec::new(),
        steps: 0,
        failures: Vec::new(),
        wall_time: Duration::ZERO,
    };
    for n in n_lo..=n_hi {
        let trees: Vec<Tree> = free_trees(n)?.collect();
        let results: Vec<Result<usize, PipelineFailure>> = pool.install(|| {
            trees
                .par_iter()
                .map(|t| {
                    transform_with(t, Options { verify: true })
                        .map(|trace| trace.steps.len())
                        .map_err(|e| PipelineFailure {
                            n,
                            edges: t.edges().to_vec(),
                            error: e.to_string(),
                        })
                })
                .collect()
        });
        report.trees += trees.len() as u64;
        report.per_order.push((n, trees.len() as u64));
        for r in results {
            match r {
                Ok(s) => report.steps += s as u64,
                Err(f) => report.failures.push(f),
            }
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_known_sequence() {
        let known = [1u64, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301];
        for (i, &want) in known.iter().enumerate() {
            assert_eq!(free_trees(i + 1).unwrap().count() as u64, want, "n={}", i + 1);
        }
    }

    #[test]
    fn generated_trees_are_pairwise_non_isomorphic() {
        for n in 1..=11 {
            let codes: HashSet<Vec<u8>> = free_trees(n).unwrap().map(|t| t.canonical_code()).collect();
            assert_eq!(codes.len(), free_trees(n).unwrap().count());
        }
    }

    #[test]
    fn sigma_histogram_sums_to_tree_count() {
        let h = sigma_histogram(10, 2).unwrap();
        assert_eq!(h.values().sum::<u64>(), 106);
        // The path and star sit at opposite ends.
        assert_eq!(*h.keys().next_back().unwrap(), 5);
        assert_eq!(*h.keys().next().unwrap(), 1);
    }

    #[test]
    fn rejects_out_of_range_orders() {
        assert!(free_trees(0).is_err());
        assert!(free_trees(MAX_ORDER + 1).is_err());
    }

    #[test]
    fn report_merge_is_order_independent() {
        let trees: Vec<Tree> = free_trees(7).unwrap().collect();
        let fwd = trees
            .iter()
            .map(check_tree)
            .fold(VerifyReport::empty(7), VerifyReport::merge);
        let rev = trees
            .iter()
            .rev()
            .map(check_tree)
            .fold(VerifyReport::empty(7), VerifyReport::merge);
        assert_eq!(fwd, rev);
        assert_eq!(fwd.trees_checked, 11);
    }

    #[test]
    fn small_orders_satisfy_both_bounds() {
        let rep = verify_bounds(9, 2).unwrap();
        assert!(rep.is_clean());
        assert_eq!(rep.trees_checked, 1 + 1 + 2 + 3 + 6 + 11 + 23 + 47);
        assert!(verify_bounds_range(1, 3, 1).is_err());
        assert!(verify_bounds(3, 0).is_err());
    }
}
