//! Trees as a skeleton plus generalized pendant paths.
//!
//! A generalized pendant path `P_q*S_r` hanging from an anchor is a path of `q`
//! new vertices leaving the anchor, whose far end (the anchor itself when
//! `q = 0`) carries `r` pendant copies of `P_2`. It has `q + 2r` vertices, its
//! weight.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::Rational;
use crate::tree::{Tree, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GppError {
    #[error("representation needs at least {min} vertices, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("P_0*S_0 is empty and cannot be a pendant")]
    EmptyPendant,
    #[error("vertex {0} is not in the skeleton")]
    NotInSkeleton(VertexId),
    #[error("skeleton is not a tree")]
    BadSkeleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gpp {
    pub q: usize,
    pub r: usize,
}

impl Gpp {
    pub fn new(q: usize, r: usize) -> Gpp {
        Gpp { q, r }
    }

    pub fn weight(&self) -> usize {
        self.q + 2 * self.r
    }

    /// The representation of a plain pendant path with `len` vertices.
    pub fn from_pendant_path(len: usize) -> Gpp {
        match len {
            0 => panic!("pendant path must be nonempty"),
            1 => Gpp::new(1, 0),
            2 => Gpp::new(0, 1),
            _ => Gpp::new(len - 2, 1),
        }
    }

    /// Edges this pendant contributes to its anchor's degree.
    pub fn anchor_degree(&self) -> usize {
        if self.q > 0 {
            1
        } else {
            self.r
        }
    }
}

impl fmt::Display for Gpp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}*S_{}", self.q, self.r)
    }
}

/// Render a list of pendants as `P_a*S_b ⊕ P_c*S_d`, or `∅` when empty.
pub fn render_gpps(gpps: &[Gpp]) -> String {
    if gpps.is_empty() {
        return "∅".into();
    }
    gpps.iter().map(Gpp::to_string).collect::<Vec<_>>().join(" ⊕ ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GppTree {
    n: usize,
    skeleton: BTreeMap<VertexId, BTreeSet<VertexId>>,
    pendants: BTreeMap<VertexId, Vec<Gpp>>,
}

impl GppTree {
    /// A one-vertex skeleton carrying the given pendants.
    pub fn single(gpps: Vec<Gpp>) -> Result<GppTree, GppError> {
        let mut pendants = BTreeMap::new();
        pendants.insert(0, gpps);
        GppTree::from_parts(BTreeMap::from([(0, BTreeSet::new())]), pendants)
    }

    pub fn from_parts(
        skeleton: BTreeMap<VertexId, BTreeSet<VertexId>>,
        mut pendants: BTreeMap<VertexId, Vec<Gpp>>,
    ) -> Result<GppTree, GppError> {
        if skeleton.is_empty() {
            return Err(GppError::BadSkeleton);
        }
        let edges: usize = skeleton.values().map(BTreeSet::len).sum();
        if edges != 2 * (skeleton.len() - 1) {
            return Err(GppError::BadSkeleton);
        }
        for (v, nb) in &skeleton {
            for w in nb {
                if !skeleton.get(w).is_some_and(|s| s.contains(v)) || w == v {
                    return Err(GppError::BadSkeleton);
                }
            }
        }
        let first = *skeleton.keys().next().expect("nonempty");
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(v) = stack.pop() {
            for &w in &skeleton[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != skeleton.len() {
            return Err(GppError::BadSkeleton);
        }
        for (v, gs) in &pendants {
            if !skeleton.contains_key(v) {
                return Err(GppError::NotInSkeleton(*v));
            }
            if gs.iter().any(|g| g.weight() == 0) {
                return Err(GppError::EmptyPendant);
            }
        }
        pendants.retain(|_, gs| !gs.is_empty());
        let n = skeleton.len() + pendants.values().flatten().map(Gpp::weight).sum::<usize>();
        Ok(GppTree { n, skeleton, pendants })
    }

    /// Strip every maximal pendant path of `tree` down to its branching anchor.
    ///
    /// A path tree keeps one skeleton vertex, its middle (the lower one when
    /// there are two), with the two halves as pendants.
    pub fn from_tree(tree: &Tree) -> Result<GppTree, GppError> {
        let n = tree.n();
        if n < 2 {
            return Err(GppError::TooSmall { n, min: 2 });
        }
        if tree.is_path() {
            let start = (0..n).find(|&v| tree.degree(v) == 1).expect("paths have ends");
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while order.len() < n {
                let next = *tree
                    .neighbors(cur)
                    .iter()
                    .find(|&&w| w != prev)
                    .expect("path continues");
                order.push(next);
                prev = cur;
                cur = next;
            }
            let mid = (n - 1) / 2;
            let gpps: Vec<Gpp> = [mid, n - 1 - mid]
                .into_iter()
                .filter(|&len| len > 0)
                .map(Gpp::from_pendant_path)
                .collect();
            let anchor = order[mid];
            return GppTree::from_parts(
                BTreeMap::from([(anchor, BTreeSet::new())]),
                BTreeMap::from([(anchor, gpps)]),
            );
        }
        let mut in_skeleton = vec![true; n];
        let mut pendants: BTreeMap<VertexId, Vec<Gpp>> = BTreeMap::new();
        for leaf in (0..n).filter(|&v| tree.is_leaf(v)) {
            let mut prev = usize::MAX;
            let mut cur = leaf;
            let mut len = 0;
            while tree.degree(cur) < 3 {
                in_skeleton[cur] = false;
                len += 1;
                let next = *tree
                    .neighbors(cur)
                    .iter()
                    .find(|&&w| w != prev)
                    .expect("non-path tree has a branching vertex");
                prev = cur;
                cur = next;
            }
            pendants.entry(cur).or_default().push(Gpp::from_pendant_path(len));
        }
        let skeleton = (0..n)
            .filter(|&v| in_skeleton[v])
            .map(|v| {
                let nb = tree.neighbors(v).iter().copied().filter(|&w| in_skeleton[w]).collect();
                (v, nb)
            })
            .collect();
        GppTree::from_parts(skeleton, pendants)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `⌊n/4⌋`, the largest sun size the reduction works with.
    pub fn r_bound(&self) -> usize {
        self.n / 4
    }

    pub fn skeleton_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.skeleton.keys().copied()
    }

    pub fn skeleton_len(&self) -> usize {
        self.skeleton.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.skeleton.contains_key(&v)
    }

    pub fn skeleton_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.skeleton[&v].iter().copied()
    }

    pub fn skeleton_degree(&self, v: VertexId) -> usize {
        self.skeleton.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn gpps(&self, v: VertexId) -> &[Gpp] {
        self.pendants.get(&v).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn gpps_mut(&mut self, v: VertexId) -> &mut Vec<Gpp> {
        self.pendants.entry(v).or_default()
    }

    /// Drop empty pendant lists so equality stays structural.
    pub(crate) fn tidy(&mut self) {
        self.pendants.retain(|_, gs| !gs.is_empty());
    }

    /// Degree in the skeleton-plus-pendants view: skeleton edges plus one per pendant.
    pub fn rep_degree(&self, v: VertexId) -> usize {
        self.skeleton_degree(v) + self.gpps(v).len()
    }

    /// Degree of `v` in the expanded tree.
    pub fn tree_degree(&self, v: VertexId) -> usize {
        self.skeleton_degree(v) + self.gpps(v).iter().map(Gpp::anchor_degree).sum::<usize>()
    }

    pub fn weight(&self, v: VertexId) -> usize {
        self.gpps(v).iter().map(Gpp::weight).sum()
    }

    pub fn is_starlike(&self, v: VertexId) -> bool {
        self.gpps(v).len() >= 2 && self.rep_degree(v) >= 3
    }

    /// Starlike vertices with their weights, lightest first, ties by id.
    pub fn starlike_vertices(&self) -> Vec<(VertexId, usize)> {
        let mut out: Vec<(VertexId, usize)> = self
            .pendants
            .keys()
            .copied()
            .filter(|&v| self.is_starlike(v))
            .map(|v| (v, self.weight(v)))
            .collect();
        out.sort_by_key(|&(v, w)| (w, v));
        out
    }

    pub fn total_weight(&self) -> usize {
        self.pendants.values().flatten().map(Gpp::weight).sum()
    }

    /// The skeleton vertex when the skeleton has exactly one.
    pub fn sole_vertex(&self) -> Option<VertexId> {
        (self.skeleton.len() == 1).then(|| *self.skeleton.keys().next().expect("nonempty"))
    }

    /// Remove a skeleton leaf, handing back its pendants.
    pub(crate) fn remove_skeleton_vertex(&mut self, v: VertexId) -> Vec<Gpp> {
        if let Some(nb) = self.skeleton.remove(&v) {
            for w in nb {
                if let Some(s) = self.skeleton.get_mut(&w) {
                    s.remove(&v);
                }
            }
        }
        self.pendants.remove(&v).unwrap_or_default()
    }

    pub fn summary(&self, v: VertexId) -> String {
        render_gpps(self.gpps(v))
    }

    /// Build the tree this representation stands for. Skeleton vertices keep
    /// their relative order and come first; the map sends each skeleton id to
    /// its index in the expanded tree.
    pub fn expand(&self) -> (Tree, BTreeMap<VertexId, VertexId>) {
        let index: BTreeMap<VertexId, VertexId> = self.skeleton.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::with_capacity(self.n.saturating_sub(1));
        for (v, nb) in &self.skeleton {
            for w in nb {
                if v < w {
                    edges.push((index[v], index[w]));
                }
            }
        }
        let mut next = self.skeleton.len();
        for (v, gs) in &self.pendants {
            for g in gs {
                let mut end = index[v];
                for _ in 0..g.q {
                    edges.push((end, next));
                    end = next;
                    next += 1;
                }
                for _ in 0..g.r {
                    edges.push((end, next));
                    edges.push((next, next + 1));
                    next += 2;
                }
            }
        }
        let tree = Tree::from_edge_list(self.n, &edges).expect("representation expands to a tree");
        (tree, index)
    }

    pub fn to_tree(&self) -> Tree {
        self.expand().0
    }
}

impl fmt::Display for GppTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(u) = self.sole_vertex() {
            return write!(f, "u + {}", self.summary(u));
        }
        let parts: Vec<String> = self
            .pendants
            .iter()
            .map(|(v, gs)| format!("v{v}: {}", render_gpps(gs)))
            .collect();
        write!(f, "[{} skeleton vertices] {}", self.skeleton.len(), parts.join("; "))
    }
}

/// Diagonal values along a pendant path when diagonalizing at `-d_n`:
/// `x_1 = -1 + 2/n`, `x_{j+1} = 2/n - 1/x_j`.
pub fn path_values(n: usize, len: usize) -> Vec<Rational> {
    let two_n = Rational::new(2, n as i64).expect("n > 0");
    let mut out = Vec::with_capacity(len);
    let mut x = &two_n - &Rational::one();
    for _ in 0..len {
        out.push(x.clone());
        x = &two_n - &x.recip().expect("pendant path values stay nonzero");
    }
    out
}

/// Diagonal values up a sun with `r` rays: `b_1 = x_1 + r(1 - 1/x_2)` at the
/// sun centre, then `b_{j+1} = 2/n - 1/b_j` along the path above it.
pub fn sun_values(n: usize, r: usize, len: usize) -> Vec<Rational> {
    let two_n = Rational::new(2, n as i64).expect("n > 0");
    let x = path_values(n, 2);
    let step = Rational::one() - x[1].recip().expect("x_2 is nonzero");
    let mut b = &x[0] + &(step * r as i64);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(b.clone());
        match b.recip() {
            Ok(inv) => b = &two_n - &inv,
            Err(_) => break,
        }
    }
    out
}

/// The ray count at which `b_1` would vanish:
/// `(n-2)(n^2+2n-4) / (4n(n-1))`.
pub fn zero_sun_size(n: usize) -> Rational {
    let n = n as i64;
    Rational::new((n - 2) * (n * n + 2 * n - 4), 4 * n * (n - 1)).expect("n > 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonalize::diagonalize;
    use crate::numerics::average_degree;

    #[test]
    fn pendant_path_convention() {
        assert_eq!(Gpp::from_pendant_path(1), Gpp::new(1, 0));
        assert_eq!(Gpp::from_pendant_path(2), Gpp::new(0, 1));
        assert_eq!(Gpp::from_pendant_path(5), Gpp::new(3, 1));
        for len in 1..10 {
            assert_eq!(Gpp::from_pendant_path(len).weight(), len);
        }
    }

    #[test]
    fn star_becomes_one_starlike_vertex() {
        let rep = GppTree::from_tree(&Tree::star(6)).unwrap();
        assert_eq!(rep.sole_vertex(), Some(0));
        assert_eq!(rep.gpps(0), &[Gpp::new(1, 0); 5]);
        assert_eq!(rep.starlike_vertices(), vec![(0, 5)]);
        assert_eq!(rep.to_string(), "u + P_1*S_0 ⊕ P_1*S_0 ⊕ P_1*S_0 ⊕ P_1*S_0 ⊕ P_1*S_0");
    }

    #[test]
    fn path_is_split_at_its_middle() {
        let rep = GppTree::from_tree(&Tree::path(7)).unwrap();
        assert_eq!(rep.sole_vertex(), Some(3));
        assert_eq!(rep.gpps(3), &[Gpp::new(1, 1), Gpp::new(1, 1)]);
        let rep = GppTree::from_tree(&Tree::path(2)).unwrap();
        assert_eq!(rep.gpps(0), &[Gpp::new(1, 0)]);
        assert!(rep.starlike_vertices().is_empty());
        assert!(GppTree::from_tree(&Tree::path(1)).is_err());
    }

    #[test]
    fn expand_round_trips_through_isomorphism() {
        // Spider with legs 1, 2, 3 plus a second branching vertex.
        let edges = [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7), (6, 8)];
        let t = Tree::from_edge_list(9, &edges).unwrap();
        let rep = GppTree::from_tree(&t).unwrap();
        assert_eq!(rep.skeleton_len(), 4);
        assert_eq!(rep.n(), 9);
        assert!(rep.to_tree().is_isomorphic(&t));
        assert_eq!(rep.tree_degree(0), 3);
    }

    #[test]
    fn rejects_empty_pendant() {
        assert_eq!(GppTree::single(vec![Gpp::new(0, 0)]), Err(GppError::EmptyPendant));
    }

    #[test]
    fn recurrences_match_diagonalization() {
        // A sun P_3*S_4 on an anchor with a long pendant path; the diagonal at
        // -d_n must follow the path and sun recurrences from the leaves up.
        let rep = GppTree::single(vec![Gpp::new(3, 4), Gpp::new(6, 0)]).unwrap();
        let (t, _) = rep.expand();
        let n = t.n();
        let res = diagonalize(&t, &-average_degree(n), 0).unwrap();
        // Vertex layout: anchor 0, path 1..=3 with the sun centre at 3,
        // rays (4,5), (6,7), ... ; then the bare path 12..=17.
        let x = path_values(n, 6);
        assert_eq!(res.values[5], x[0]);
        assert_eq!(res.values[4], x[1]);
        for (k, v) in [17usize, 16, 15, 14, 13, 12].into_iter().enumerate() {
            assert_eq!(res.values[v], x[k]);
        }
        let b = sun_values(n, 4, 3);
        assert_eq!(res.values[3], b[0]);
        assert_eq!(res.values[2], b[1]);
        assert_eq!(res.values[1], b[2]);
    }

    #[test]
    fn zero_sun_size_zeroes_first_sun_value() {
        for n in [8usize, 13, 53, 200] {
            let x = path_values(n, 2);
            let r0 = zero_sun_size(n);
            let b1 = &x[0] + &(r0 * &(Rational::one() - x[1].recip().unwrap()));
            assert!(b1.is_zero(), "n={n}");
        }
    }
}
