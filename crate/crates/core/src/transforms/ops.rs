use super::{StepKind, StepOp, TransformError, MIN_ORDER};
use crate::gpp::{Gpp, GppTree};
use crate::tree::VertexId;

/// Result of one rewrite. `focus` is the vertex whose pendants changed (the
/// target for a collapse, otherwise the vertex the step was applied at).
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub rep: GppTree,
    pub kind: StepKind,
    pub focus: VertexId,
}

fn fail(op: &'static str, vertex: VertexId, reason: impl Into<String>) -> TransformError {
    TransformError::Precondition {
        op,
        vertex,
        reason: reason.into(),
    }
}

/// Apply a single rewrite, checking its preconditions.
pub fn apply_op(rep: &GppTree, u: VertexId, op: &StepOp) -> Result<Applied, TransformError> {
    let name = op_name(op);
    if !rep.contains(u) {
        return Err(fail(name, u, "vertex is not in the skeleton"));
    }
    let n = rep.n();
    let big_r = rep.r_bound();
    let gs = rep.gpps(u).to_vec();
    let get = |i: usize| {
        gs.get(i)
            .copied()
            .ok_or_else(|| fail(name, u, format!("no pendant at index {i}")))
    };
    let needs_order = || {
        if n < MIN_ORDER {
            Err(fail(name, u, format!("order {n} is below {MIN_ORDER}")))
        } else {
            Ok(())
        }
    };
    let mut next = rep.clone();
    let mut focus = u;

    let kind = match op {
        StepOp::StarUp { gpp } => {
            needs_order()?;
            let g = get(*gpp)?;
            if g.q < 2 {
                return Err(fail(name, u, format!("{g} has a path shorter than 2")));
            }
            if g.r + 1 > big_r {
                return Err(fail(name, u, format!("{g} already has at least {big_r} rays")));
            }
            if rep.tree_degree(u) < 2 {
                return Err(fail(name, u, "anchor is a leaf"));
            }
            next.gpps_mut(u)[*gpp] = Gpp::new(g.q - 2, g.r + 1);
            StepKind::StarUp
        }
        StepOp::StarDown { sun, from } => {
            needs_order()?;
            let (s, f) = (get(*sun)?, get(*from)?);
            if sun == from {
                return Err(fail(name, u, "sun and donor coincide"));
            }
            if s.q != 1 || s.r + 1 > big_r {
                return Err(fail(name, u, format!("{s} is not P_1*S_r with r < {big_r}")));
            }
            if f.q != 0 || f.r == 0 {
                return Err(fail(name, u, format!("{f} has no ray at the anchor")));
            }
            let list = next.gpps_mut(u);
            list[*sun].r += 1;
            list[*from].r -= 1;
            if list[*from].r == 0 {
                list.remove(*from);
            }
            StepKind::StarDown
        }
        StepOp::StarStar { first, second, regroup } => {
            needs_order()?;
            let (a, b) = (get(*first)?, get(*second)?);
            if first == second {
                return Err(fail(name, u, "pendants coincide"));
            }
            if a.q > 1 || b.q > 1 {
                return Err(fail(name, u, format!("{a} and {b} must have paths of length 0 or 1")));
            }
            let total = a.r + b.r;
            let (main, rest, kind) = match (a.q, b.q) {
                (0, 0) => {
                    let (x, y) = regroup.unwrap_or((total, 0));
                    if x + y != total {
                        return Err(fail(name, u, format!("regroup {x}+{y} does not sum to {total}")));
                    }
                    (Gpp::new(0, x), Gpp::new(0, y), StepKind::StarStarRegroup)
                }
                _ if regroup.is_some() => {
                    return Err(fail(name, u, "regroup only applies to two P_0 suns"));
                }
                _ if a.r > big_r || b.r > big_r => {
                    return Err(fail(name, u, format!("a sun exceeds {big_r} rays")));
                }
                (1, 1) if total <= big_r => (Gpp::new(2, total), Gpp::new(0, 0), StepKind::StarStar11),
                (1, 1) => (Gpp::new(2, big_r), Gpp::new(0, total - big_r), StepKind::StarStar11),
                _ if total <= big_r => (Gpp::new(1, total), Gpp::new(0, 0), StepKind::StarStar10),
                _ => (Gpp::new(1, big_r), Gpp::new(0, total - big_r), StepKind::StarStar10),
            };
            let list = next.gpps_mut(u);
            list[*first] = main;
            list[*second] = rest;
            list.retain(|g| g.weight() > 0);
            kind
        }
        StepOp::Collapse => {
            if rep.skeleton_degree(u) != 1 {
                return Err(fail(name, u, "vertex is not a skeleton leaf"));
            }
            if gs.len() != 1 {
                return Err(fail(name, u, format!("expected one pendant, found {}", gs.len())));
            }
            let g = gs[0];
            let mut prev = u;
            let mut cur = rep.skeleton_neighbors(u).next().expect("leaf has a neighbour");
            let mut dist = 1;
            let mut dropped = vec![u];
            while rep.skeleton_degree(cur) == 2 && rep.gpps(cur).is_empty() {
                let nxt = rep
                    .skeleton_neighbors(cur)
                    .find(|&w| w != prev)
                    .expect("degree-2 vertex continues");
                dropped.push(cur);
                prev = cur;
                cur = nxt;
                dist += 1;
            }
            for v in dropped {
                next.remove_skeleton_vertex(v);
            }
            next.gpps_mut(cur).push(Gpp::new(g.q + dist, g.r));
            focus = cur;
            StepKind::Collapse
        }
        StepOp::Rebase { q } => {
            if rep.sole_vertex() != Some(u) || gs.len() != 2 || q.len() != 2 {
                return Err(fail(name, u, "rebase needs a one-vertex skeleton with two pendants"));
            }
            if q[0] + q[1] != gs[0].q + gs[1].q {
                return Err(fail(name, u, "rebase must keep the total path length"));
            }
            let new = [Gpp::new(q[0], gs[0].r), Gpp::new(q[1], gs[1].r)];
            if new.iter().any(|g| g.weight() == 0) {
                return Err(fail(name, u, "rebase would leave an empty pendant"));
            }
            *next.gpps_mut(u) = new.to_vec();
            StepKind::Rebase
        }
        StepOp::MergeSuns => {
            if rep.sole_vertex() != Some(u) || n % 4 != 3 {
                return Err(fail(name, u, "needs a one-vertex skeleton and n = 3 mod 4"));
            }
            if gs.iter().any(|g| g.q != 0) || gs.iter().map(|g| g.r).sum::<usize>() != 2 * big_r + 1 {
                return Err(fail(name, u, "pendants must be 2r+1 rays at the anchor"));
            }
            *next.gpps_mut(u) = vec![Gpp::new(1, big_r), Gpp::new(1, big_r)];
            StepKind::PathCase
        }
        StepOp::Marker { .. } => {
            return Err(fail(name, u, "markers carry no rewrite"));
        }
    };
    next.tidy();
    debug_assert_eq!(next.n(), n);
    Ok(Applied { rep: next, kind, focus })
}

fn op_name(op: &StepOp) -> &'static str {
    match op {
        StepOp::StarUp { .. } => "star-up",
        StepOp::StarDown { .. } => "star-down",
        StepOp::StarStar { .. } => "star-star",
        StepOp::Collapse => "collapse",
        StepOp::Rebase { .. } => "rebase",
        StepOp::MergeSuns => "merge-suns",
        StepOp::Marker { .. } => "marker",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(gs: &[(usize, usize)]) -> GppTree {
        GppTree::single(gs.iter().map(|&(q, r)| Gpp::new(q, r)).collect()).unwrap()
    }

    #[test]
    fn star_up_moves_two_path_vertices_into_a_ray() {
        // n = 1 + 5 + 4 = 10, r bound 2.
        let rep = single(&[(5, 0), (0, 2)]);
        let a = apply_op(&rep, 0, &StepOp::StarUp { gpp: 0 }).unwrap();
        assert_eq!(a.rep.gpps(0), &[Gpp::new(3, 1), Gpp::new(0, 2)]);
        assert_eq!(a.kind, StepKind::StarUp);
        let b = apply_op(&a.rep, 0, &StepOp::StarUp { gpp: 0 }).unwrap();
        assert_eq!(b.rep.gpps(0)[0], Gpp::new(1, 2));
        // r bound reached.
        let c = single(&[(4, 3), (0, 2)]);
        assert!(apply_op(&c, 0, &StepOp::StarUp { gpp: 0 }).is_err());
    }

    #[test]
    fn star_up_rejects_leaf_anchor_and_small_order() {
        let rep = single(&[(8, 0)]);
        assert!(apply_op(&rep, 0, &StepOp::StarUp { gpp: 0 }).is_err());
        let small = single(&[(3, 0), (2, 0)]);
        assert!(matches!(
            apply_op(&small, 0, &StepOp::StarUp { gpp: 0 }),
            Err(TransformError::Precondition { .. })
        ));
    }

    #[test]
    fn star_star_overflow_splits_off_extra_rays() {
        // n = 1 + 7 + 7 + 2 = 17, bound 4.
        let rep = single(&[(1, 3), (1, 3), (0, 1)]);
        let a = apply_op(
            &rep,
            0,
            &StepOp::StarStar {
                first: 0,
                second: 1,
                regroup: None,
            },
        )
        .unwrap();
        assert_eq!(a.kind, StepKind::StarStar11);
        assert_eq!(a.rep.gpps(0), &[Gpp::new(2, 4), Gpp::new(0, 2), Gpp::new(0, 1)]);
        let b = apply_op(
            &rep,
            0,
            &StepOp::StarStar {
                first: 2,
                second: 0,
                regroup: None,
            },
        )
        .unwrap();
        assert_eq!(b.kind, StepKind::StarStar10);
        assert_eq!(b.rep.gpps(0), &[Gpp::new(1, 3), Gpp::new(1, 4)]);
        assert!(apply_op(
            &rep,
            0,
            &StepOp::StarStar {
                first: 0,
                second: 1,
                regroup: Some((3, 3))
            }
        )
        .is_err());
    }

    #[test]
    fn regroup_preserves_ray_count() {
        let rep = single(&[(0, 3), (0, 1), (1, 0)]);
        let a = apply_op(
            &rep,
            0,
            &StepOp::StarStar {
                first: 0,
                second: 1,
                regroup: Some((2, 2)),
            },
        )
        .unwrap();
        assert_eq!(a.rep.gpps(0), &[Gpp::new(0, 2), Gpp::new(0, 2), Gpp::new(1, 0)]);
        assert!(apply_op(
            &rep,
            0,
            &StepOp::StarStar {
                first: 0,
                second: 1,
                regroup: Some((2, 1))
            }
        )
        .is_err());
    }

    #[test]
    fn collapse_walks_to_next_branching_vertex() {
        // Skeleton 0 - 3 - 4 - 5 with a lone pendant on 0 and three on 5.
        let rep = GppTree::from_parts(
            [(0, [3].into()), (3, [0, 4].into()), (4, [3, 5].into()), (5, [4].into())].into(),
            [
                (0, vec![Gpp::new(2, 0)]),
                (5, vec![Gpp::new(0, 1), Gpp::new(1, 0), Gpp::new(1, 0)]),
            ]
            .into(),
        )
        .unwrap();
        let a = apply_op(&rep, 0, &StepOp::Collapse).unwrap();
        assert_eq!(a.focus, 5);
        assert_eq!(a.rep.sole_vertex(), Some(5));
        assert_eq!(a.rep.gpps(5).last(), Some(&Gpp::new(5, 0)));
        assert_eq!(a.rep.n(), rep.n());
        assert!(a.rep.to_tree().is_isomorphic(&rep.to_tree()));
    }

    #[test]
    fn rebase_and_merge() {
        let rep = single(&[(1, 4), (1, 3)]);
        let a = apply_op(&rep, 0, &StepOp::Rebase { q: vec![0, 2] }).unwrap();
        assert_eq!(a.rep.gpps(0), &[Gpp::new(0, 4), Gpp::new(2, 3)]);
        let empty = single(&[(2, 0), (0, 3)]);
        assert!(apply_op(&empty, 0, &StepOp::Rebase { q: vec![0, 2] }).is_err());
        // n = 1 + 2*7 = 15, bound 3: seven rays become two P_1*S_3.
        let star = single(&[(0, 3), (0, 4)]);
        let m = apply_op(&star, 0, &StepOp::MergeSuns).unwrap();
        assert_eq!(m.rep.gpps(0), &[Gpp::new(1, 3), Gpp::new(1, 3)]);
        assert_eq!(m.kind, StepKind::PathCase);
    }
}
