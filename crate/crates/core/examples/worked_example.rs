//! Reduce the 53-vertex tree with five starlike vertices to the prototype,
//! printing the starlike weights after each reduction and the final steps.
//!
//! ```text
//! cargo run --example worked_example
//! cargo run --example worked_example -- trace.jsonl   # also write the trace
//! ```

use lapdist::diagonalize::sigma;
use lapdist::transforms::{transform, StepKind};
use lapdist::Tree;

fn main() {
    let tree = Tree::parse_edge_list(include_str!("../data/worked_example_n53.tree")).unwrap();
    let trace = transform(&tree).expect("every tree of order >= 8 reduces");

    println!("starlike weights:");
    for (k, w) in trace.starlike_milestones().iter().enumerate() {
        println!("  {k:>2}: {w:?}");
    }
    println!("single starlike vertex: {}", trace.after_reductions());

    let last = trace
        .steps
        .iter()
        .rposition(|s| s.kind == StepKind::Reduce)
        .unwrap_or(0);
    for s in trace.steps[last + 1..].iter().filter(|s| !s.kind.is_marker()) {
        println!("  {:?}: {} -> {}", s.kind, s.before, s.after);
    }
    println!(
        "result {} (sigma {} -> {})",
        trace.result,
        sigma(&tree).sigma,
        sigma(&trace.result.to_tree()).sigma
    );

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, trace.to_jsonl()).expect("writable trace file");
        println!("wrote {} records to {path}", trace.steps.len() + 2);
    }
}
