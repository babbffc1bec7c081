use std::collections::HashSet;

use lapdist::enumerate::{free_trees, verify_bounds, verify_bounds_range};
use lapdist::transforms::prototype;
use lapdist::Tree;

/// Isomorphism classes found by running through every Prüfer code.
fn classes_by_prufer(n: usize) -> usize {
    if n <= 2 {
        return 1;
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut seen = HashSet::new();
    loop {
        seen.insert(Tree::from_prufer(&seq).unwrap().canonical_code());
        let mut i = 0;
        while i < len && seq[i] == n - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
        seq[i] += 1;
    }
    seen.len()
}

#[test]
fn counts_match_labelled_enumeration() {
    for n in 1..=9 {
        assert_eq!(free_trees(n).unwrap().count(), classes_by_prufer(n), "n={n}");
    }
}

#[test]
fn every_order_contains_path_and_star() {
    for n in 3..=14 {
        let codes: HashSet<Vec<u8>> = free_trees(n).unwrap().map(|t| t.canonical_code()).collect();
        assert!(codes.contains(&Tree::path(n).canonical_code()));
        assert!(codes.contains(&Tree::star(n).canonical_code()));
    }
}

#[test]
fn margin_is_zero_once_a_prototype_is_in_range() {
    let rep = verify_bounds(10, 3).unwrap();
    assert!(rep.is_clean());
    assert_eq!(rep.min_margin, Some(0));
    assert!(rep.per_order.contains(&(10, 106)));
    // The prototype itself attains the bound.
    let t = prototype(10).unwrap().to_tree();
    let only = verify_bounds_range(10, 10, 1).unwrap();
    assert_eq!(only.trees_checked, 106);
    assert!(lapdist::sigma(&t).below == 5);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let mut a = verify_bounds_range(6, 12, 1).unwrap();
    let mut b = verify_bounds_range(6, 12, 4).unwrap();
    a.wall_time = Default::default();
    b.wall_time = Default::default();
    assert_eq!(a, b);
}
