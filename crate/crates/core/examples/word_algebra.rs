//! Reduction, cyclic reduction, exponent sums and rotation conjugacy.

use cyclic_pinch::word::{commutator, cyclic_conjugacy_check, Alphabet, Word};

fn main() -> cyclic_pinch::Result<()> {
    let w: Word = "a2 a1 b b^-1 a1^-1 a1 b a1^-1 a2^-1".parse()?;
    println!("w          = {w}");
    println!("reduced    = {}", w.free_reduce());
    let (u, core) = w.cyclic_reduce();
    println!("conjugator = {u}");
    println!("core       = {core}");
    println!("abelian    = {:?}", w.abelianization(2));

    let c = commutator(&"a1".parse()?, &"b".parse()?);
    println!("[a1, b]    = {c}");
    let s = c.exponent_sums(0);
    println!("b: total {}, positive {}, negative {}", s.total, s.positive, s.negative);

    let rotated: Word = "b a1^-1 b^-1 a1".parse()?;
    println!("{c} ~ {rotated}: {}", cyclic_conjugacy_check(&c, &rotated));
    println!("{c} ~ {}: {}", c.inverse(), cyclic_conjugacy_check(&c, &c.inverse()));
    println!("c^3 is a power of c: {:?}", c.pow(3).is_power_of(&c));

    let d = Word::parse_with("b x1 b^-1 x1^-1", Alphabet::Second)?;
    println!("second factor: {}", d.display_with(Alphabet::Second));
    Ok(())
}
