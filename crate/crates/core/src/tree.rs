//! Finite trees with compact adjacency, rooting, text I/O, random generation
//! and canonical codes.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::numerics::{self, Rational};

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("expected {expected} edges for a tree, got {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range for n={n}")]
    OutOfRange { vertex: VertexId, n: usize },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edges do not connect all vertices")]
    Disconnected,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An undirected tree on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    offsets: Vec<usize>,
    nbrs: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Tree {
    pub fn from_edge_list(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Tree, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                expected: n - 1,
                got: edges.len(),
            });
        }
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut nbrs = vec![0usize; 2 * (n - 1)];
        for &(u, v) in edges {
            nbrs[fill[u]] = v;
            fill[u] += 1;
            nbrs[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            let s = &mut nbrs[offsets[v]..offsets[v + 1]];
            s.sort_unstable();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(TreeError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
            }
        }
        let tree = Tree {
            n,
            offsets,
            nbrs,
            edges: edges.to_vec(),
        };
        // n-1 distinct edges form a tree exactly when they connect every vertex.
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in tree.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    pub fn path(n: usize) -> Tree {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Tree::from_edge_list(n, &edges).expect("path is a tree")
    }

    pub fn star(n: usize) -> Tree {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Tree::from_edge_list(n, &edges).expect("star is a tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) == 1
    }

    pub fn is_path(&self) -> bool {
        self.max_degree() <= 2
    }

    pub fn average_degree(&self) -> Rational {
        numerics::average_degree(self.n)
    }

    pub fn rooted(&self, root: VertexId) -> RootedTree {
        RootedTree::new(self, root)
    }

    /// The one or two vertices of minimum eccentricity.
    pub fn centers(&self) -> Vec<VertexId> {
        if self.n <= 2 {
            return (0..self.n).collect();
        }
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut layer: Vec<VertexId> = (0..self.n).filter(|&v| deg[v] == 1).collect();
        let mut remaining = self.n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in self.neighbors(v) {
                    if deg[w] > 1 {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    /// Parse the edge-list text format: a vertex count line followed by one
    /// `u v` line per edge. Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Tree, TreeError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            last_line = line_no;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| TreeError::Parse {
                    line: line_no,
                    msg: format!("expected a non-negative integer, found {s:?}"),
                })
            };
            match n {
                None => {
                    if fields.len() != 1 {
                        return Err(TreeError::Parse {
                            line: line_no,
                            msg: "first line must hold only the vertex count".into(),
                        });
                    }
                    n = Some(parse(fields[0])?);
                }
                Some(n) => {
                    if fields.len() != 2 {
                        return Err(TreeError::Parse {
                            line: line_no,
                            msg: format!("expected `u v`, found {} fields", fields.len()),
                        });
                    }
                    let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                    for w in [u, v] {
                        if w >= n {
                            return Err(TreeError::Parse {
                                line: line_no,
                                msg: format!("vertex {w} out of range for n={n}"),
                            });
                        }
                    }
                    edges.push((u, v));
                }
            }
        }
        let n = n.ok_or(TreeError::Parse {
            line: last_line.max(1),
            msg: "missing vertex count".into(),
        })?;
        Tree::from_edge_list(n, &edges)
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Decode a Prüfer sequence of length `n - 2` into a labelled tree.
    pub fn from_prufer(seq: &[VertexId]) -> Result<Tree, TreeError> {
        let n = seq.len() + 2;
        if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
            return Err(TreeError::OutOfRange { vertex: bad, n });
        }
        let mut deg = vec![1usize; n];
        for &v in seq {
            deg[v] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut ptr = 0;
        while deg[ptr] != 1 {
            ptr += 1;
        }
        let mut leaf = ptr;
        for &v in seq {
            edges.push((leaf, v));
            deg[v] -= 1;
            if deg[v] == 1 && v < ptr {
                leaf = v;
            } else {
                ptr += 1;
                while deg[ptr] != 1 {
                    ptr += 1;
                }
                leaf = ptr;
            }
        }
        edges.push((leaf, n - 1));
        Tree::from_edge_list(n, &edges)
    }

    /// A uniformly random labelled tree on `n` vertices.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tree, TreeError> {
        match n {
            0 => Err(TreeError::Empty),
            1 => Tree::from_edge_list(1, &[]),
            2 => Tree::from_edge_list(2, &[(0, 1)]),
            _ => {
                let seq: Vec<VertexId> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
                Tree::from_prufer(&seq)
            }
        }
    }

    /// Isomorphism-invariant byte string; equal codes iff isomorphic trees.
    pub fn canonical_code(&self) -> Vec<u8> {
        self.centers()
            .into_iter()
            .map(|c| self.rooted(c).ahu_code())
            .min()
            .expect("a tree has a center")
    }

    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self.n == other.n && self.canonical_code() == other.canonical_code()
    }
}

/// A tree with a distinguished root and a children-before-parents order.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    order: Vec<VertexId>,
    children: Vec<Vec<VertexId>>,
}

impl RootedTree {
    pub fn new(tree: &Tree, root: VertexId) -> RootedTree {
        let n = tree.n();
        let mut parent = vec![None; n];
        let mut bfs = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            bfs.push(v);
            for &w in tree.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        let mut children = vec![Vec::new(); n];
        for &v in &bfs {
            if let Some(p) = parent[v] {
                children[p].push(v);
            }
        }
        bfs.reverse();
        RootedTree {
            root,
            parent,
            order: bfs,
            children,
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// Every vertex after all of its descendants; the root comes last.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn ahu_code(&self) -> Vec<u8> {
        let mut codes: Vec<Vec<u8>> = vec![Vec::new(); self.parent.len()];
        for &v in &self.order {
            let mut kids: Vec<Vec<u8>> = self.children[v]
                .iter()
                .map(|&c| std::mem::take(&mut codes[c]))
                .collect();
            kids.sort_unstable();
            let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
            code.push(b'(');
            for k in kids {
                code.extend_from_slice(&k);
            }
            code.push(b')');
            codes[v] = code;
        }
        std::mem::take(&mut codes[self.root])
    }
}
