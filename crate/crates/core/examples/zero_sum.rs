//! Nielsen moves that give some generator of `c` exponent sum zero, so it
//! can play the role of `b`.

use cyclic_pinch::nielsen::{apply_moves, bezout_matrix, zero_sum_automorphism};
use cyclic_pinch::word::Word;

fn main() -> cyclic_pinch::Result<()> {
    for text in ["a1^2 a2^3 a1 a2^-1", "a1 a2 a1 a2 a2", "b a1^4 b a1"] {
        let c: Word = text.parse()?;
        let rank = 3;
        let sums = c.abelianization(rank);
        let z = zero_sum_automorphism(&sums, &c)?;
        println!("c = {c}, sums {sums:?}");
        println!("  {} moves, witness generator {}", z.moves.len(), z.witness);
        println!("  image {}", z.image);
        println!("  sums after {:?}", z.image.abelianization(rank));
        println!("  matrix {:?}", z.matrix);
        assert_eq!(apply_moves(&z.moves, &c, rank)?.free_reduce(), z.image);
    }
    let m = bezout_matrix(4, 6)?;
    println!("Bezout matrix for (4, 6): {m:?}");
    Ok(())
}
