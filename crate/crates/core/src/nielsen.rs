//! Nielsen moves on a free basis `t_0, …, t_{r-1}` and the automorphism that
//! makes the exponent sum of some occurring generator vanish.
//!
//! Generator ids are the same as in [`crate::word`]; the basis rank is the
//! length of the exponent-sum vector.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Gen, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NielsenMove {
    /// `t_i ↦ t_i⁻¹`
    Invert(Gen),
    /// `t_i ↔ t_j`
    Swap(Gen, Gen),
    /// `t_target ↦ t_target · t_by^{±1}` (right) or `t_by^{±1} · t_target` (left).
    Multiply {
        target: Gen,
        by: Gen,
        side: Side,
        inverse: bool,
    },
}

impl NielsenMove {
    pub fn multiply(target: Gen, by: Gen, sign: i64) -> Self {
        NielsenMove::Multiply {
            target,
            by,
            side: Side::Right,
            inverse: sign < 0,
        }
    }

    fn validate(&self, rank: usize) -> Result<()> {
        let check = |g: Gen| {
            if g >= rank {
                Err(Error::GeneratorOutOfRange { gen: g, rank })
            } else {
                Ok(())
            }
        };
        match *self {
            NielsenMove::Invert(i) => check(i),
            NielsenMove::Swap(i, j) | NielsenMove::Multiply { target: i, by: j, .. } => {
                check(i)?;
                check(j)?;
                if i == j {
                    return Err(Error::InvalidMove(format!("{self:?} uses one index twice")));
                }
                Ok(())
            }
        }
    }

    /// Image of the basis letter `t_gen` (positive) under this move.
    fn image_of(&self, gen: Gen) -> Vec<Letter> {
        match *self {
            NielsenMove::Invert(i) if i == gen => vec![Letter::neg(gen)],
            NielsenMove::Swap(i, j) if gen == i => vec![Letter::pos(j)],
            NielsenMove::Swap(i, j) if gen == j => vec![Letter::pos(i)],
            NielsenMove::Multiply {
                target,
                by,
                side,
                inverse,
            } if target == gen => {
                // application order: the right factor acts first
                let extra = Letter::new(by, inverse);
                match side {
                    Side::Right => vec![extra, Letter::pos(gen)],
                    Side::Left => vec![Letter::pos(gen), extra],
                }
            }
            _ => vec![Letter::pos(gen)],
        }
    }

    /// Abelianized matrix `M` with `ab(φ(w)) = M · ab(w)`.
    pub fn matrix(&self, rank: usize) -> Vec<Vec<i64>> {
        let mut m = identity(rank);
        match *self {
            NielsenMove::Invert(i) => m[i][i] = -1,
            NielsenMove::Swap(i, j) => {
                m[i][i] = 0;
                m[j][j] = 0;
                m[i][j] = 1;
                m[j][i] = 1;
            }
            NielsenMove::Multiply {
                target, by, inverse, ..
            } => m[by][target] = if inverse { -1 } else { 1 },
        }
        m
    }
}

fn identity(rank: usize) -> Vec<Vec<i64>> {
    (0..rank)
        .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn apply_move(mv: &NielsenMove, w: &Word, rank: usize) -> Result<Word> {
    mv.validate(rank)?;
    if let Some(g) = w.max_gen().filter(|&g| g >= rank) {
        return Err(Error::GeneratorOutOfRange { gen: g, rank });
    }
    let mut letters = Vec::with_capacity(w.len() + 2);
    for &l in w.letters() {
        let image = Word::from_letters(mv.image_of(l.gen));
        let image = if l.inverse { image.inverse() } else { image };
        letters.extend(image.into_letters());
    }
    Ok(Word::from_letters(letters).free_reduce())
}

/// Applies the moves in order: the first move is applied first.
pub fn apply_moves(moves: &[NielsenMove], w: &Word, rank: usize) -> Result<Word> {
    if let Some(g) = w.max_gen().filter(|&g| g >= rank) {
        return Err(Error::GeneratorOutOfRange { gen: g, rank });
    }
    moves
        .iter()
        .try_fold(w.free_reduce(), |acc, mv| apply_move(mv, &acc, rank))
}

/// Abelianized matrix of the composite automorphism.
pub fn moves_matrix(moves: &[NielsenMove], rank: usize) -> Vec<Vec<i64>> {
    moves
        .iter()
        .fold(identity(rank), |acc, mv| mat_mul(&mv.matrix(rank), &acc))
}

/// The two-generator matrix built from `lcm` and Bézout coefficients.
///
/// With `m = lcm(s1, s2) = m1·s1 = m2·s2` and `m1·a + m2·b = 1`, the rows are
/// `(m1, -m2)` and `(b, a)`; the matrix has determinant 1 and sends
/// `(s1, s2)` to `(0, b·s1 + a·s2)`.
pub fn bezout_matrix(s1: i64, s2: i64) -> Result<[[i64; 2]; 2]> {
    if s1 == 0 || s2 == 0 {
        return Err(Error::Unsupported("Bézout matrix needs nonzero sums".into()));
    }
    let m = s1.lcm(&s2);
    let (m1, m2) = (m / s1, m / s2);
    let eg = m1.extended_gcd(&m2);
    debug_assert_eq!(eg.gcd, 1);
    Ok([[m1, -m2], [eg.y, eg.x]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSum {
    pub moves: Vec<NielsenMove>,
    pub image: Word,
    pub witness: Gen,
    pub matrix: Vec<Vec<i64>>,
}

/// Finds Nielsen moves `φ` such that some generator occurring in `φ(c)` has
/// exponent sum zero.
///
/// `sums[i]` must be the exponent sum of generator `i` in `c`; the basis rank
/// is `sums.len()`. The two occurring generators with the smallest nonzero
/// `|sum|` (ties to the smaller index) are reduced against each other by the
/// Euclidean algorithm. If only one generator occurs, it is first multiplied
/// by the smallest other basis generator.
pub fn zero_sum_automorphism(sums: &[i64], c: &Word) -> Result<ZeroSum> {
    let rank = sums.len();
    if let Some(g) = c.max_gen().filter(|&g| g >= rank) {
        return Err(Error::GeneratorOutOfRange { gen: g, rank });
    }
    if c.abelianization(rank) != sums {
        return Err(Error::Unsupported(format!(
            "exponent sums {sums:?} do not match the word {c}"
        )));
    }
    let c = c.free_reduce();
    let occurring: Vec<Gen> = (0..rank).filter(|&g| c.contains_gen(g)).collect();
    if occurring.is_empty() {
        return Err(Error::Unsupported("the trivial word has no occurring generator".into()));
    }
    if let Some(&g) = occurring.iter().find(|&&g| sums[g] == 0) {
        return Ok(ZeroSum {
            moves: Vec::new(),
            image: c,
            witness: g,
            matrix: identity(rank),
        });
    }

    let mut by_size = occurring.clone();
    by_size.sort_by_key(|&g| (sums[g].abs(), g));
    let mut moves = Vec::new();
    let mut v = sums.to_vec();
    let (p, q) = if by_size.len() >= 2 {
        (by_size[0], by_size[1])
    } else {
        if rank < 2 {
            return Err(Error::Unsupported(format!(
                "{c} is a nonzero power of the only generator"
            )));
        }
        let p = by_size[0];
        let q = (0..rank).find(|&g| g != p).expect("rank >= 2");
        // t_p -> t_p t_q makes the q-sum equal to the p-sum
        moves.push(NielsenMove::multiply(p, q, 1));
        v[q] += v[p];
        (p, q)
    };

    while v[p] != 0 && v[q] != 0 {
        let (big, small) = if v[p].abs() >= v[q].abs() { (p, q) } else { (q, p) };
        // t_small -> t_small t_big^s changes v[big] by s * v[small]
        let s = -(v[big].signum() * v[small].signum());
        for _ in 0..v[big].abs() / v[small].abs() {
            moves.push(NielsenMove::multiply(small, big, s));
            v[big] += s * v[small];
        }
    }
    let witness = if v[p] == 0 { p } else { q };

    let mut image = apply_moves(&moves, &c, rank)?;
    if !image.contains_gen(witness) {
        // conjugate every other generator by t_witness; the abelianization is unchanged
        for i in (0..rank).filter(|&i| i != witness) {
            moves.push(NielsenMove::Multiply {
                target: i,
                by: witness,
                side: Side::Left,
                inverse: false,
            });
            moves.push(NielsenMove::Multiply {
                target: i,
                by: witness,
                side: Side::Right,
                inverse: true,
            });
        }
        image = apply_moves(&moves, &c, rank)?;
    }
    let matrix = moves_matrix(&moves, rank);
    Ok(ZeroSum {
        moves,
        image,
        witness,
        matrix,
    })
}
