use super::trace::{StepKind, StepOp, Trace, TransformStep};
use super::{apply_op, prototype, TransformError, MIN_ORDER};
use crate::diagonalize::sigma;
use crate::gpp::{Gpp, GppTree};
use crate::tree::{Tree, VertexId};

/// Orders up to this size recompute sigma after every step by default.
pub const DEFAULT_VERIFY_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Recompute sigma exactly before and after every rewrite and fail on any
    /// decrease.
    pub verify: bool,
}

impl Options {
    pub fn for_order(n: usize) -> Options {
        Options {
            verify: n <= DEFAULT_VERIFY_LIMIT,
        }
    }
}

/// Rewrite `tree` into the prototype of its order, recording every step.
pub fn transform(tree: &Tree) -> Result<Trace, TransformError> {
    transform_with(tree, Options::for_order(tree.n()))
}

pub fn transform_with(tree: &Tree, opts: Options) -> Result<Trace, TransformError> {
    let n = tree.n();
    if n < MIN_ORDER {
        return Err(TransformError::TooSmall { n });
    }
    let target = prototype(n)?;
    let target_code = target.to_tree().canonical_code();
    if tree.canonical_code() == target_code {
        return Ok(Trace {
            initial: tree.clone(),
            steps: Vec::new(),
            result: target,
        });
    }
    let rep = GppTree::from_tree(tree)?;
    let mut eng = Engine::new(tree.clone(), rep, opts.verify);
    eng.run()?;
    let result = eng.rep.clone();
    if result.to_tree().canonical_code() != target_code {
        return Err(TransformError::NotPrototype(result.to_string()));
    }
    Ok(Trace {
        initial: eng.initial,
        steps: eng.steps,
        result,
    })
}

struct Engine {
    initial: Tree,
    rep: GppTree,
    verify: bool,
    sigma: Option<usize>,
    steps: Vec<TransformStep>,
    big_r: usize,
    alpha: usize,
}

/// Position of `p` after the pendants at `removed` (ascending) were deleted.
fn shifted(p: usize, removed: &[usize]) -> usize {
    p - removed.iter().filter(|&&s| s < p).count()
}

impl Engine {
    fn new(initial: Tree, rep: GppTree, verify: bool) -> Engine {
        let n = rep.n();
        let sigma = verify.then(|| sigma(&initial).sigma);
        Engine {
            initial,
            rep,
            verify,
            sigma,
            steps: Vec::new(),
            big_r: n / 4,
            alpha: n % 4,
        }
    }

    fn unexpected(&self, u: VertexId, reason: &str) -> TransformError {
        TransformError::Unexpected {
            config: format!("{} (at {u})", self.rep),
            reason: reason.into(),
        }
    }

    fn gpps(&self, u: VertexId) -> Vec<Gpp> {
        self.rep.gpps(u).to_vec()
    }

    /// Apply one rewrite and return the vertex whose pendants it changed.
    fn apply(&mut self, u: VertexId, op: StepOp) -> Result<VertexId, TransformError> {
        let before = self.rep.summary(u);
        let applied = apply_op(&self.rep, u, &op)?;
        let sigma_after = self.verify.then(|| sigma(&applied.rep.to_tree()).sigma);
        let step = TransformStep {
            step_index: self.steps.len(),
            kind: applied.kind,
            vertex: u,
            before,
            after: applied.rep.summary(applied.focus),
            sigma_before: self.sigma,
            sigma_after,
            op,
        };
        if let (Some(b), Some(a)) = (self.sigma, sigma_after) {
            if a < b {
                return Err(TransformError::Improper {
                    sigma_before: b,
                    sigma_after: a,
                    step: Box::new(step),
                    trace: Box::new(Trace {
                        initial: self.initial.clone(),
                        steps: self.steps.clone(),
                        result: self.rep.clone(),
                    }),
                });
            }
        }
        self.steps.push(step);
        self.rep = applied.rep;
        self.sigma = sigma_after;
        Ok(applied.focus)
    }

    fn marker(&mut self, kind: StepKind, u: VertexId, before: String, label: String) {
        self.steps.push(TransformStep {
            step_index: self.steps.len(),
            kind,
            vertex: u,
            before,
            after: self.rep.summary(u),
            sigma_before: self.sigma,
            sigma_after: self.sigma,
            op: StepOp::Marker { label },
        });
    }

    fn run(&mut self) -> Result<(), TransformError> {
        loop {
            let starlike = self.rep.starlike_vertices();
            if starlike.len() < 2 {
                break;
            }
            let (u, w) = starlike[0];
            if w > 2 * self.big_r {
                return Err(self.unexpected(u, "lightest starlike vertex is heavier than 2r"));
            }
            let (count, total) = (starlike.len(), self.rep.total_weight());
            let before = self.rep.summary(u);
            self.reduce_all(u)?;
            let focus = if self.rep.skeleton_degree(u) == 1 {
                self.apply(u, StepOp::Collapse)?
            } else {
                u
            };
            let label = format!("reduced starlike vertex {u} of weight {w}");
            self.marker(StepKind::Reduce, focus, before, label);
            let after = self.rep.starlike_vertices().len();
            if after > count || (after == count && self.rep.total_weight() <= total) {
                return Err(TransformError::Stalled(format!(
                    "starlike count {count} -> {after}, pendant weight {total} -> {}",
                    self.rep.total_weight()
                )));
            }
        }
        let u = match self.rep.sole_vertex() {
            Some(u) => u,
            None => {
                let v = self.rep.skeleton_vertices().next().expect("nonempty");
                return Err(self.unexpected(v, "fewer than two starlike vertices on a larger skeleton"));
            }
        };
        match self.rep.gpps(u).len() {
            2 => self.finish_two(u),
            l if l >= 3 => self.finish_one_starlike(u),
            _ => Err(self.unexpected(u, "single vertex with fewer than two pendants")),
        }
    }

    /// Star-up pendant `i` at `u` for as long as the rule applies.
    fn saturate(&mut self, u: VertexId, i: usize) -> Result<(), TransformError> {
        loop {
            let g = self.rep.gpps(u)[i];
            if g.q < 2 || g.r + 1 > self.big_r || self.rep.tree_degree(u) < 2 {
                return Ok(());
            }
            self.apply(u, StepOp::StarUp { gpp: i })?;
        }
    }

    /// Merge the pendants at positions `idxs` (ascending) into one of the same
    /// total weight, which ends up at `idxs[0]`. Needs that weight to be at
    /// most `2r`.
    fn combine(&mut self, u: VertexId, idxs: &[usize]) -> Result<usize, TransformError> {
        let gs = self.gpps(u);
        let w: usize = idxs.iter().map(|&i| gs[i].weight()).sum();
        if w > 2 * self.big_r {
            return Err(self.unexpected(u, "combined pendant would exceed weight 2r"));
        }
        let acc = idxs[0];
        self.saturate(u, acc)?;
        for (k, &s) in idxs.iter().enumerate().skip(1) {
            let pos = s - (k - 1);
            self.saturate(u, pos)?;
            let (a, b) = (self.rep.gpps(u)[acc], self.rep.gpps(u)[pos]);
            let regroup = (a.q == 0 && b.q == 0).then_some((a.r + b.r, 0));
            self.apply(
                u,
                StepOp::StarStar {
                    first: acc,
                    second: pos,
                    regroup,
                },
            )?;
            self.saturate(u, acc)?;
        }
        Ok(acc)
    }

    fn reduce_all(&mut self, u: VertexId) -> Result<(), TransformError> {
        let all: Vec<usize> = (0..self.rep.gpps(u).len()).collect();
        self.combine(u, &all).map(|_| ())
    }

    /// Star-star on `i` and `j`; returns the positions of the main result and
    /// of the overflow sun, if any.
    fn star_star(&mut self, u: VertexId, i: usize, j: usize) -> Result<(usize, Option<usize>), TransformError> {
        let before = self.rep.gpps(u).len();
        let (a, b) = (self.rep.gpps(u)[i], self.rep.gpps(u)[j]);
        let regroup = (a.q == 0 && b.q == 0).then_some((a.r + b.r, 0));
        self.apply(
            u,
            StepOp::StarStar {
                first: i,
                second: j,
                regroup,
            },
        )?;
        if self.rep.gpps(u).len() < before {
            Ok((shifted(i, &[j]), None))
        } else {
            Ok((i, Some(j)))
        }
    }

    /// Move rays from the `P_0` sun at `from` onto the `P_1` sun at `sun`
    /// until it has `r` of them, by star-star when both fit the bound and by
    /// repeated star-down otherwise. Returns the final position of `sun`.
    fn fill_sun(&mut self, u: VertexId, sun: usize, from: usize) -> Result<usize, TransformError> {
        let (s, f) = (self.rep.gpps(u)[sun], self.rep.gpps(u)[from]);
        if s.q != 1 || f.q != 0 {
            return Err(self.unexpected(u, "fill_sun needs a P_1 sun and a P_0 donor"));
        }
        if s.r >= self.big_r {
            return Ok(sun);
        }
        if f.r <= self.big_r {
            return Ok(self.star_star(u, sun, from)?.0);
        }
        let mut sun = sun;
        while self.rep.gpps(u)[sun].r < self.big_r {
            let len = self.rep.gpps(u).len();
            self.apply(u, StepOp::StarDown { sun, from })?;
            if self.rep.gpps(u).len() < len {
                sun = shifted(sun, &[from]);
                break;
            }
        }
        Ok(sun)
    }

    /// Final stage for a one-vertex skeleton with exactly two pendants.
    fn finish_two(&mut self, u: VertexId) -> Result<(), TransformError> {
        let big_r = self.big_r;
        loop {
            let gs = self.gpps(u);
            if gs.len() != 2 {
                return Err(self.unexpected(u, "expected exactly two pendants"));
            }
            if gs[0].r >= big_r && gs[1].r >= big_r {
                break;
            }
            let total_q = gs[0].q + gs[1].q;
            let mut best: Option<(usize, usize, usize)> = None;
            for i in 0..2 {
                let j = 1 - i;
                if gs[i].r >= big_r {
                    continue;
                }
                let qj = if gs[j].r >= 1 { 0 } else { 1 };
                if total_q < qj + 2 {
                    continue;
                }
                if best.is_none_or(|(bi, _, _)| gs[i].r < gs[bi].r) {
                    best = Some((i, total_q - qj, qj));
                }
            }
            let Some((i, qi, qj)) = best else { break };
            if gs[i].q != qi {
                let mut q = vec![0; 2];
                q[i] = qi;
                q[1 - i] = qj;
                self.apply(u, StepOp::Rebase { q })?;
            }
            self.apply(u, StepOp::StarUp { gpp: i })?;
        }

        let gs = self.gpps(u);
        let qs = (gs[0].q, gs[1].q);
        if gs[0].r >= big_r && gs[1].r >= big_r {
            return match (self.alpha, qs) {
                (1, (0, 0)) | (2, (0, 1)) | (2, (1, 0)) | (3, (1, 1)) => Ok(()),
                (3, (0, 0)) => self.apply(u, StepOp::MergeSuns).map(drop),
                (3, (0, 2)) | (3, (2, 0)) => self.apply(u, StepOp::Rebase { q: vec![1, 1] }).map(drop),
                _ => Err(self.unexpected(u, "both suns full but no known finish")),
            };
        }
        match (self.alpha, qs.0 + qs.1) {
            (1, 0) => self
                .apply(
                    u,
                    StepOp::StarStar {
                        first: 0,
                        second: 1,
                        regroup: Some((big_r, big_r)),
                    },
                )
                .map(drop),
            (3, 0) => {
                self.apply(
                    u,
                    StepOp::StarStar {
                        first: 0,
                        second: 1,
                        regroup: Some((big_r, big_r + 1)),
                    },
                )?;
                self.apply(u, StepOp::MergeSuns).map(drop)
            }
            (0 | 2, 1) => {
                let (x, y) = if qs.0 == 1 { (0, 1) } else { (1, 0) };
                if gs[x].r > big_r {
                    return Err(self.unexpected(u, "P_1 sun above the bound"));
                }
                self.fill_sun(u, x, y).map(|_| ())
            }
            _ => Err(self.unexpected(u, "two pendants with no applicable finish")),
        }
    }

    /// Final stage when a one-vertex skeleton carries three or more pendants.
    fn finish_one_starlike(&mut self, u: VertexId) -> Result<(), TransformError> {
        let big_r = self.big_r;
        let before = self.rep.summary(u);
        for i in 0..self.rep.gpps(u).len() {
            self.saturate(u, i)?;
        }
        let gs = self.gpps(u);
        let small: Vec<usize> = (0..gs.len()).filter(|&i| gs[i].r < big_r).collect();
        let big: Vec<usize> = (0..gs.len()).filter(|&i| gs[i].r >= big_r).collect();
        let label = format!(
            "{} pendants, {} with fewer than {big_r} rays, n mod 4 = {}",
            gs.len(),
            small.len(),
            self.alpha
        );
        self.marker(StepKind::OneStarCase, u, before, label);
        match big.len() {
            2 => self.two_full(u, &small, &big)?,
            1 => self.one_full(u, &small, big[0])?,
            0 => self.none_full(u)?,
            _ => return Err(self.unexpected(u, "three or more full suns")),
        }
        self.finish_two(u)
    }

    fn two_full(&mut self, u: VertexId, small: &[usize], big: &[usize]) -> Result<(), TransformError> {
        let gs = self.gpps(u);
        let shape: Vec<Gpp> = small.iter().map(|&i| gs[i]).collect();
        let (a, b) = (big[0], big[1]);
        match (self.alpha, gs[a].q + gs[b].q, shape.as_slice()) {
            (2, 0, [g]) if *g == Gpp::new(1, 0) => {
                self.fill_sun(u, small[0], a)?;
            }
            (3, 0, [g]) if *g == Gpp::new(0, 1) => {
                self.star_star(u, a, small[0])?;
            }
            (3, 0, [g, h]) if *g == Gpp::new(1, 0) && *h == Gpp::new(1, 0) => {
                // Fill each lone leaf from one of the full suns.
                let s0 = self.fill_sun(u, small[0], a)?;
                let gs = self.gpps(u);
                let s1 = (0..gs.len()).find(|&i| i != s0 && gs[i] == Gpp::new(1, 0));
                let donor = (0..gs.len()).find(|&i| gs[i].q == 0);
                match (s1, donor) {
                    (Some(s1), Some(d)) => {
                        self.fill_sun(u, s1, d)?;
                    }
                    _ => return Err(self.unexpected(u, "lost track of the second leaf")),
                }
            }
            (3, 1, [g]) if *g == Gpp::new(1, 0) => {
                let p0 = if gs[a].q == 0 { a } else { b };
                self.fill_sun(u, small[0], p0)?;
            }
            _ => return Err(self.unexpected(u, "two full suns in an unknown configuration")),
        }
        Ok(())
    }

    fn one_full(&mut self, u: VertexId, small: &[usize], z: usize) -> Result<(), TransformError> {
        let big_r = self.big_r;
        let gs = self.gpps(u);
        let w_small: usize = small.iter().map(|&i| gs[i].weight()).sum();
        if w_small <= 2 * big_r {
            self.combine(u, small)?;
            return Ok(());
        }
        match self.alpha {
            2 => {
                let i = *small
                    .iter()
                    .find(|&&i| gs[i].q == 1)
                    .ok_or_else(|| self.unexpected(u, "odd small weight without a P_1 sun"))?;
                let rest: Vec<usize> = small.iter().copied().filter(|&k| k != i).collect();
                let (i, r) = self.combine_keep(u, &rest, i)?;
                self.fill_sun(u, i, r)?;
                Ok(())
            }
            3 => self.one_full_alpha3(u, small, z),
            _ => Err(self.unexpected(u, "small pendants too heavy")),
        }
    }

    /// Combine `idxs` and report where `keep` and the combined pendant end up.
    fn combine_keep(&mut self, u: VertexId, idxs: &[usize], keep: usize) -> Result<(usize, usize), TransformError> {
        if idxs.len() < 2 {
            return Ok((keep, idxs[0]));
        }
        let at = self.combine(u, idxs)?;
        Ok((shifted(keep, &idxs[1..]), at))
    }

    fn one_full_alpha3(&mut self, u: VertexId, small: &[usize], z: usize) -> Result<(), TransformError> {
        let mut small = small.to_vec();
        let mut z = z;
        let gs = self.gpps(u);
        if small.iter().all(|&i| gs[i].r == 0) {
            // Turn two lone leaves into one P_2.
            let (a, b) = (small[0], small[1]);
            let at = self.combine(u, &[a, b])?;
            z = shifted(z, &[b]);
            small = small.iter().filter(|&&k| k != b).map(|&k| shifted(k, &[b])).collect();
            debug_assert!(small.contains(&at));
        }
        let gs = self.gpps(u);
        let j = *small
            .iter()
            .find(|&&i| gs[i].r >= 1)
            .ok_or_else(|| self.unexpected(u, "no small sun with a ray"))?;
        let rest: Vec<usize> = small.iter().copied().filter(|&k| k != j).collect();
        let (j, g) = self.combine_keep(u, &rest, j)?;
        let z = if rest.len() >= 2 { shifted(z, &rest[1..]) } else { z };
        let gs = self.gpps(u);
        // The two remaining small pendants weigh 2r + 1 or 2r + 2 together.
        match (gs[z].q, gs[j].q, gs[g].q) {
            (1, _, _) => {
                self.star_star(u, j, g)?;
            }
            (0, 0, 0) => {
                self.star_star(u, z, j)?;
            }
            (0, 1, 1) => {
                let (_, left) = self.star_star(u, j, z)?;
                let left = left.ok_or_else(|| self.unexpected(u, "expected overflow"))?;
                self.star_star(u, g, left)?;
            }
            _ => return Err(self.unexpected(u, "one full sun, no applicable pairing")),
        }
        Ok(())
    }

    fn none_full(&mut self, u: VertexId) -> Result<(), TransformError> {
        let big_r = self.big_r;
        loop {
            let gs = self.gpps(u);
            if gs.len() == 2 {
                return Ok(());
            }
            let order = by_weight(&gs);
            let (a, b) = (order[0], order[1]);
            if gs[a].weight() + gs[b].weight() > 2 * big_r {
                break;
            }
            self.combine(u, &[a.min(b), a.max(b)])?;
        }
        let gs = self.gpps(u);
        let order = by_weight(&gs);
        let keep = if self.alpha == 3 { 3 } else { 2 };
        let mut rest: Vec<usize> = order[keep..].to_vec();
        rest.sort_unstable();
        let mut head: Vec<usize> = order[..keep].to_vec();
        if rest.len() >= 2 {
            self.combine(u, &rest)?;
            head = head.iter().map(|&p| shifted(p, &rest[1..])).collect();
        }
        let tail = rest.first().copied();
        // Roles: head[0], head[1] are the lightest pair; `tail` is the combined rest.
        let a = head[0];
        let b = head[1];
        match self.alpha {
            0 | 2 => {
                let c = tail.ok_or_else(|| self.unexpected(u, "missing third pendant"))?;
                self.three_odd(u, [a, b, c])
            }
            1 => {
                let c = tail.ok_or_else(|| self.unexpected(u, "missing third pendant"))?;
                self.three_even(u, [a, b, c])
            }
            _ => {
                let c = head[2];
                let Some(d) = tail else {
                    return self.three_even(u, [a, b, c]);
                };
                // Neither pair fits in 2r and together they weigh 4r + 2, so each
                // weighs 2r + 1: one P_1 and one P_0 sun.
                let gs = self.gpps(u);
                let (p, q0) = if gs[a].q == 1 { (a, b) } else { (b, a) };
                let (p2, q2) = if gs[c].q == 1 { (c, d) } else { (d, c) };
                self.star_star(u, p, q0)?;
                let (p2, q2) = (shifted(p2, &[q0]), shifted(q2, &[q0]));
                self.star_star(u, p2, q2)?;
                Ok(())
            }
        }
    }

    /// Three pendants whose path lengths sum to an odd number (orders
    /// `0` and `2` mod 4).
    fn three_odd(&mut self, u: VertexId, [a, b, c]: [usize; 3]) -> Result<(), TransformError> {
        let gs = self.gpps(u);
        let ones: Vec<usize> = [a, b, c].into_iter().filter(|&i| gs[i].q == 1).collect();
        match ones.len() {
            1 => {
                // Pair the P_1 sun with its partner in the lightest pair, or
                // with the lightest pendant when it is the third one.
                let x = ones[0];
                let y = if x == a { b } else { a };
                let z = [a, b, c].into_iter().find(|&i| i != x && i != y).expect("three");
                if let (_, Some(left)) = self.star_star(u, x, y)? {
                    self.star_star(u, z, left)?;
                }
                Ok(())
            }
            3 => {
                if let (_, Some(left)) = self.star_star(u, a, b)? {
                    self.star_star(u, c, left)?;
                }
                Ok(())
            }
            _ => Err(self.unexpected(u, "expected an odd number of P_1 suns")),
        }
    }

    /// Three pendants whose path lengths sum to an even number (orders `1`
    /// and `3` mod 4).
    fn three_even(&mut self, u: VertexId, [a, b, c]: [usize; 3]) -> Result<(), TransformError> {
        let gs = self.gpps(u);
        let ones: Vec<usize> = [a, b, c].into_iter().filter(|&i| gs[i].q == 1).collect();
        match ones.len() {
            0 => {
                self.star_star(u, a, c)?;
                Ok(())
            }
            2 => {
                let y = [a, b, c].into_iter().find(|&i| gs[i].q == 0).expect("one P_0");
                let x = if y == a { b } else { a };
                let w = [a, b, c].into_iter().find(|&i| i != x && i != y).expect("three");
                let (_, left) = self.star_star(u, x, y)?;
                if let Some(left) = left {
                    self.star_star(u, w, left)?;
                }
                Ok(())
            }
            _ => Err(self.unexpected(u, "expected an even number of P_1 suns")),
        }
    }
}

/// Pendant positions sorted by weight, ties by position.
fn by_weight(gs: &[Gpp]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gs.len()).collect();
    order.sort_by_key(|&i| (gs[i].weight(), i));
    order
}
