//! Growing partial `α`-injections on the integers and closing them.

use std::collections::BTreeSet;

use cyclic_pinch::extension::ActionState;
use cyclic_pinch::word::Word;

fn main() -> cyclic_pinch::Result<()> {
    let c: Word = "a1 b a1^-1 b^-1".parse()?;
    let none = BTreeSet::new();
    let mut state = ActionState::new(2, 0);

    let (x, y) = state.embed_path(&c.pow(2), &none)?;
    println!("path of c^2: {x} -> {y}");
    let base = state.embed_cycle(&c.pow(3), &none)?;
    println!("cycle of c^3 at {base}");
    let w: Word = "a2 b".parse()?;
    let z = state.embed_q_witness(&c, &w, &none)?;
    println!("witness for {w} at {z}");
    let (lo, hi) = state.reserve_interval(6, &none);
    println!("fixed interval [{lo}, {hi}]");

    state.audit()?;
    let a = state.close();
    println!("c^2 sends {x} to {}", a.evaluate(&c.pow(2), x));
    println!("c^3 fixes {base}: {}", a.evaluate(&c.pow(3), base) == base);
    println!("{w} moves {z}: {}", a.evaluate(&w, z) != z);
    for p in lo..=hi {
        assert_eq!(a.alpha(1).apply(p), p);
    }
    println!("{} log steps, next free point {}", state.log().len(), state.next_free());
    Ok(())
}
