mod common;

use proptest::prelude::*;

use common::*;
use cyclic_pinch::nielsen::{apply_moves, moves_matrix, NielsenMove, Side};
use cyclic_pinch::word::{cyclic_conjugacy_check, Letter, Word};

fn letters(rank_alpha: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..=rank_alpha, any::<bool>()), 0..max)
        .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
}

fn nielsen_move(rank: usize) -> impl Strategy<Value = NielsenMove> {
    prop_oneof![
        (0..rank).prop_map(NielsenMove::Invert),
        (0..rank, 0..rank)
            .prop_filter("distinct", |(i, j)| i != j)
            .prop_map(|(i, j)| NielsenMove::Swap(i, j)),
        (0..rank, 0..rank, any::<bool>(), any::<bool>())
            .prop_filter("distinct", |(i, j, _, _)| i != j)
            .prop_map(|(target, by, left, inverse)| NielsenMove::Multiply {
                target,
                by,
                side: if left { Side::Left } else { Side::Right },
                inverse,
            }),
    ]
}

fn w(letters: &[Letter]) -> Word {
    Word::from_letters(letters.to_vec())
}

proptest! {
    #[test]
    fn free_reduce_idempotent_and_shrinking(u in letters(2, 40)) {
        let r = w(&u).free_reduce();
        prop_assert!(r.len() <= u.len());
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert_eq!(r.letters().to_vec(), naive_reduce(&u));
    }

    #[test]
    fn cyclic_core_survives_rotation(u in letters(2, 30), k in 0usize..30) {
        let mut v = u.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        let (_, cu) = w(&u).cyclic_reduce();
        let (_, cv) = w(&v).cyclic_reduce();
        prop_assert!(cu.is_cyclically_reduced());
        prop_assert!(cu.rotations().any(|r| r == cv) || (cu.is_empty() && cv.is_empty()));
    }

    #[test]
    fn exponent_sums_are_homomorphic(u in letters(2, 30), v in letters(2, 30)) {
        let (wu, wv) = (w(&u), w(&v));
        for g in 0..=2 {
            let t = wu.exponent_sums(g).total;
            prop_assert_eq!(wu.free_reduce().exponent_sums(g).total, t);
            prop_assert_eq!(wu.mul(&wv).exponent_sums(g).total, t + wv.exponent_sums(g).total);
            let r = wu.exponent_sums(g);
            prop_assert!(r.positive >= 0 && r.negative <= 0 && r.positive + r.negative == r.total);
        }
    }

    #[test]
    fn conjugacy_symmetric_and_rotation_closed(u in letters(2, 16), v in letters(2, 16), k in 0usize..16) {
        let (wu, wv) = (w(&u), w(&v));
        prop_assert_eq!(cyclic_conjugacy_check(&wu, &wv), cyclic_conjugacy_check(&wv, &wu));
        prop_assert_eq!(cyclic_conjugacy_check(&wu, &wv), naive_conjugate(&u, &v));
        let mut r = u.clone();
        if !r.is_empty() {
            let k = k % r.len();
            r.rotate_left(k);
        }
        prop_assert!(cyclic_conjugacy_check(&wu, &w(&r)));
    }

    #[test]
    fn parse_display_round_trip(u in letters(3, 20)) {
        let word = w(&u);
        let back: Word = word.to_string().parse().unwrap();
        prop_assert_eq!(back, word);
    }

    #[test]
    fn nielsen_abelianization(
        u in letters(3, 25),
        moves in prop::collection::vec(nielsen_move(4), 0..8),
    ) {
        let word = w(&u);
        let image = apply_moves(&moves, &word, 4).unwrap();
        let m = moves_matrix(&moves, 4);
        let ab = word.abelianization(4);
        let expected: Vec<i64> = (0..4).map(|i| (0..4).map(|j| m[i][j] * ab[j]).sum()).collect();
        prop_assert_eq!(image.abelianization(4), expected);
        prop_assert!(det(&m).abs() == 1);
    }
}

#[test]
fn empty_move_list_is_identity() {
    let word: Word = "a1 b^2 a2^-1".parse().unwrap();
    assert_eq!(apply_moves(&[], &word, 3).unwrap(), word);
}
