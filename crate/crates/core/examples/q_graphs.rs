//! Stallings folding of `Q₀(c, w)` and the shape of the result.

use cyclic_pinch::graph::{betti_number, build_q, cycle_graph, embed_check, fold, path_graph, q_zero};
use cyclic_pinch::word::Word;

fn main() -> cyclic_pinch::Result<()> {
    let c: Word = "a1 b a1^-1 b^-1".parse()?;
    for text in ["a1", "b", "a2 b", "a1 b a1^-1", "b^2 a1"] {
        let w: Word = text.parse()?;
        let q0 = q_zero(&c, &w);
        let (q, shape) = build_q(&c, &w)?;
        println!(
            "w = {:<12} Q0: {:>2} vertices  folded: {:>2} vertices, {:>2} edges, betti {}  {:?}{}",
            w.to_string(),
            q0.vertex_count(),
            q.vertex_count(),
            q.edge_count(),
            betti_number(&q),
            shape.kind,
            if shape.collision { " (collision)" } else { "" }
        );
    }

    // a cycle of a cyclically reduced word is already folded
    let cg = cycle_graph(&c, 0)?;
    let (folded, _) = fold(&cg);
    println!("C(c): {} vertices, folded {}", cg.vertex_count(), folded.vertex_count());
    let c2 = cycle_graph(&c.pow(2), 0)?;
    let p = path_graph(&c, 0)?;
    println!("C(c) -> C(c^2): {}", embed_check(&cg, &c2, None).is_some());
    println!("P(c) -> C(c^2): {}", embed_check(&p, &c2, Some((0, 0))).is_some());
    Ok(())
}
