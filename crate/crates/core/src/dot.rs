//! Graphviz output for trees and pendant representations.

use std::fmt::Write;

use crate::gpp::GppTree;
use crate::tree::Tree;

/// Plain undirected graph, one node per vertex.
pub fn tree_to_dot(tree: &Tree, name: &str) -> String {
    let mut out = format!("graph {name} {{\n  node [shape=circle, label=\"\", width=0.2];\n");
    for v in 0..tree.n() {
        let _ = writeln!(out, "  {v};");
    }
    for &(u, v) in tree.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// The expanded tree of `rep` with every sun centre drawn as a filled box.
/// Node ids follow [`GppTree::expand`].
pub fn expanded_to_dot(rep: &GppTree, name: &str) -> String {
    let (tree, _) = rep.expand();
    let mut suns = vec![false; tree.n()];
    let mut next = rep.skeleton_len();
    for (i, v) in rep.skeleton_vertices().enumerate() {
        for g in rep.gpps(v) {
            let mut end = i;
            for _ in 0..g.q {
                end = next;
                next += 1;
            }
            if g.r > 0 {
                suns[end] = true;
            }
            next += 2 * g.r;
        }
    }
    let mut out = format!("graph {name} {{\n  node [shape=circle, label=\"\", width=0.2];\n");
    for (v, &sun) in suns.iter().enumerate() {
        if sun {
            let _ = writeln!(out, "  {v} [shape=box, style=filled, fillcolor=black];");
        } else {
            let _ = writeln!(out, "  {v};");
        }
    }
    for &(u, v) in tree.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// Compact drawing: skeleton vertices as labelled circles, path vertices as
/// points and each sun as a single box labelled `S_r`.
pub fn gpp_to_dot(rep: &GppTree, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in rep.skeleton_vertices() {
        let _ = writeln!(out, "  v{v} [shape=circle, label=\"{v}\"];");
        for w in rep.skeleton_neighbors(v).filter(|&w| v < w) {
            let _ = writeln!(out, "  v{v} -- v{w};");
        }
    }
    for v in rep.skeleton_vertices() {
        for (k, g) in rep.gpps(v).iter().enumerate() {
            let mut prev = format!("v{v}");
            let path_len = if g.r > 0 { g.q.saturating_sub(1) } else { g.q };
            for j in 0..path_len {
                let id = format!("v{v}_{k}_p{j}");
                let _ = writeln!(out, "  {id} [shape=point];");
                let _ = writeln!(out, "  {prev} -- {id};");
                prev = id;
            }
            if g.r > 0 {
                let id = format!("v{v}_{k}_s");
                let _ = writeln!(out, "  {id} [shape=box, label=\"S_{}\"];", g.r);
                if g.q == 0 {
                    // The anchor itself is the sun centre.
                    let _ = writeln!(out, "  {prev} -- {id} [style=dashed];");
                } else {
                    let _ = writeln!(out, "  {prev} -- {id};");
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
