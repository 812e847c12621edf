//! Making two factor actions have the same nontrivial orbit census, so an
//! intertwiner exists.

use std::collections::BTreeSet;

use cyclic_pinch::amalgam::nontrivial_census;
use cyclic_pinch::extension::ActionState;
use cyclic_pinch::generic::Interval;
use cyclic_pinch::padding::{balance, isolated_census};
use cyclic_pinch::word::{Alphabet, Word};

fn main() -> cyclic_pinch::Result<()> {
    let c: Word = "a1 b a1^-1 b^-1 a2 a3 a2^-1 a3^-1".parse()?;
    let d = Word::parse_with("b x1 b^-1 x1^-1", Alphabet::Second)?;

    println!("transposition under [b, x1]: {:?}", isolated_census(&d, 1, 2, &[vec![1, 0]])?);
    println!("(0 2) under [b, x1]:         {:?}", isolated_census(&d, 1, 3, &[vec![2, 1, 0]])?);

    let none = BTreeSet::new();
    let mut g = ActionState::new(3, 0);
    g.embed_cycle(&c.pow(3), &none)?;
    g.embed_cycle(&c.pow(5), &none)?;
    let mut h = ActionState::new(1, g.next_free() + 10);
    h.embed_cycle(&d.pow(2), &none)?;

    let census = |s: &ActionState, w: &Word, lo: i64| {
        nontrivial_census(&s.close(), w, Interval::new(lo, s.next_free() + 20))
    };
    let (gc, hc) = (census(&g, &c, -20)?, census(&h, &d, h.origin() - 20)?);
    println!("before: G {gc:?}  H {hc:?}");
    let floor = h.next_free();
    let searches = balance((&mut g, &c), (&mut h, &d), (&gc, &hc), floor, 20_000, 1000, 0)?;
    let (gc, hc) = (census(&g, &c, -20)?, census(&h, &d, -20)?);
    println!("after {searches} gadget searches: G {gc:?}  H {hc:?}");
    assert_eq!(gc, hc);
    Ok(())
}
