mod common;

use proptest::prelude::*;
use rayon::prelude::*;

use cyclic_pinch::graph::{
    build_q, cycle_graph, fold, fold_naive, path_graph, q_zero, QKind, LabeledGraph, MARK_END, MARK_START,
};
use cyclic_pinch::word::{reduced_words_up_to, Letter, Word};

fn edges(max_vertex: i64) -> impl Strategy<Value = Vec<(i64, i64, usize)>> {
    prop::collection::vec((0..max_vertex, 0..max_vertex, 0usize..=2), 0..20)
}

fn graph(edges: &[(i64, i64, usize)]) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for &(s, d, l) in edges {
        g.add_edge(s, d, l);
    }
    g
}

fn reduced(rank_alpha: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..=rank_alpha, any::<bool>()), 1..max).prop_map(|v| {
        Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()).free_reduce()
    })
}

proptest! {
    #[test]
    fn fold_matches_naive_and_is_idempotent(e in edges(10)) {
        let g = graph(&e);
        let (fast, m1) = fold(&g);
        let (slow, m2) = fold_naive(&g);
        prop_assert!(fast.is_well_labeled());
        prop_assert_eq!(&fast, &slow);
        prop_assert_eq!(m1, m2);
        prop_assert_eq!(fold(&fast).0, fast);
    }

    #[test]
    fn fold_is_order_independent(e in edges(8), seed in any::<u64>()) {
        let mut shuffled = e.clone();
        let k = if e.is_empty() { 0 } else { (seed as usize) % e.len() };
        shuffled.rotate_left(k);
        shuffled.reverse();
        let (a, _) = fold(&graph(&e));
        let (b, _) = fold(&graph(&shuffled));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn paths_and_cycles_are_well_labeled(u in reduced(2, 12)) {
        prop_assume!(!u.is_empty());
        prop_assert!(path_graph(&u, 0).unwrap().is_well_labeled());
        let (_, core) = u.cyclic_reduce();
        if !core.is_empty() {
            prop_assert!(cycle_graph(&core, 0).unwrap().is_well_labeled());
        }
    }

    #[test]
    fn folded_q_reads_its_words(c in reduced(1, 7), u in reduced(1, 7)) {
        let (_, c) = c.cyclic_reduce();
        prop_assume!(c.contains_alpha() && u.is_power_of(&c).is_none());
        let (q, _) = fold(&q_zero(&c, &u));
        let v0 = q.mark(MARK_START).unwrap();
        let wv0 = q.mark(MARK_END).unwrap();
        prop_assert!(q.is_well_labeled());
        prop_assert_eq!(q.read(v0, &c), Some(v0));
        prop_assert_eq!(q.read(wv0, &c), Some(wv0));
        prop_assert_eq!(q.read(v0, &u), Some(wv0));
    }
}

#[test]
fn theta_branches_beta_only_forces_alpha_elsewhere() {
    let words = reduced_words_up_to(1, 6);
    let cs: Vec<&Word> = words
        .iter()
        .filter(|c| c.is_cyclically_reduced() && c.contains_alpha())
        .collect();
    let thetas: usize = cs
        .par_iter()
        .map(|c| {
            let mut seen = 0;
            for u in words.iter().filter(|u| u.is_power_of(c).is_none()) {
                let (_, shape) = build_q(c, u).unwrap();
                if shape.kind != QKind::ThreeCycles {
                    continue;
                }
                seen += 1;
                let parts = &shape.components;
                assert_eq!(parts.len(), 3);
                if let Some(i) = parts.iter().position(|p| !p.contains_alpha()) {
                    for (j, p) in parts.iter().enumerate() {
                        assert!(j == i || p.contains_alpha(), "c = {c}, w = {u}: {parts:?}");
                    }
                }
            }
            seen
        })
        .sum();
    assert!(thetas > 0);
}
