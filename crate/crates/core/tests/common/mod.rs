//! Reference implementations used as oracles by the integration tests.
//! Nothing here calls into the library's own reduction or evaluation code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cyclic_pinch::extension::ClosedAction;
use cyclic_pinch::word::{Gen, Letter, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Repeatedly deletes the first adjacent cancelling pair.
pub fn naive_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut v = letters.to_vec();
    'scan: loop {
        for i in 0..v.len().saturating_sub(1) {
            if v[i].gen == v[i + 1].gen && v[i].inverse != v[i + 1].inverse {
                v.drain(i..i + 2);
                continue 'scan;
            }
        }
        return v;
    }
}

/// Strips matching ends off the reduced word; returns the stripped prefix
/// (in application order) and the core.
pub fn naive_cyclic_core(letters: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let mut v = naive_reduce(letters);
    let mut prefix = Vec::new();
    while v.len() >= 2 {
        let (f, l) = (v[0], v[v.len() - 1]);
        if f.gen == l.gen && f.inverse != l.inverse {
            prefix.push(f);
            v.remove(0);
            v.pop();
        } else {
            break;
        }
    }
    (prefix, v)
}

/// Conjugacy in a free group through the doubled-core substring test.
pub fn naive_conjugate(u: &[Letter], v: &[Letter]) -> bool {
    let (_, a) = naive_cyclic_core(u);
    let (_, b) = naive_cyclic_core(v);
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let doubled: Vec<Letter> = a.iter().chain(a.iter()).copied().collect();
    doubled.windows(b.len()).any(|w| w == b.as_slice())
}

pub fn inverse(letters: &[Letter]) -> Vec<Letter> {
    letters
        .iter()
        .rev()
        .map(|l| Letter::new(l.gen, !l.inverse))
        .collect()
}

pub fn concat(parts: &[&[Letter]]) -> Vec<Letter> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// `w·x`: `β` is the shift, `α_i` read straight off the permutation tables.
pub fn eval(a: &ClosedAction, w: &Word, x: i64) -> i64 {
    w.letters().iter().fold(x, |y, l| match (l.gen, l.inverse) {
        (0, false) => y + 1,
        (0, true) => y - 1,
        (g, false) => a.alphas[g - 1].apply(y),
        (g, true) => a.alphas[g - 1].apply_inv(y),
    })
}

/// The `w`-orbit of `x` if it closes within `limit` steps.
pub fn orbit(a: &ClosedAction, w: &Word, x: i64, limit: usize) -> Option<Vec<i64>> {
    let mut out = vec![x];
    let mut y = eval(a, w, x);
    while y != x {
        if out.len() >= limit {
            return None;
        }
        out.push(y);
        y = eval(a, w, y);
    }
    Some(out)
}

/// Orbits of size `size` lying inside `lo..=hi`.
pub fn census_at(a: &ClosedAction, w: &Word, lo: i64, hi: i64, size: usize) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for x in lo..=hi {
        if seen.contains(&x) {
            continue;
        }
        if let Some(o) = orbit(a, w, x, (hi - lo + 1) as usize) {
            seen.extend(o.iter().copied());
            if o.len() == size && o.iter().all(|&y| (lo..=hi).contains(&y)) {
                count += 1;
            }
        }
    }
    count
}

pub fn all_letters(rank_alpha: usize) -> Vec<Letter> {
    (0..=rank_alpha)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect()
}

/// Every word (reduced or not) of length exactly `len`.
pub fn all_words(rank_alpha: usize, len: usize) -> Vec<Vec<Letter>> {
    let letters = all_letters(rank_alpha);
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn random_word(rng: &mut ChaCha8Rng, rank_alpha: usize, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| Letter::new(rng.gen_range(0..=rank_alpha), rng.gen_bool(0.5)))
        .collect()
}

/// A random freely reduced word of exactly `len` letters.
pub fn random_reduced(rng: &mut ChaCha8Rng, rank_alpha: usize, len: usize) -> Vec<Letter> {
    let mut v: Vec<Letter> = Vec::with_capacity(len);
    while v.len() < len {
        let l = Letter::new(rng.gen_range(0..=rank_alpha), rng.gen_bool(0.5));
        if v.last().map_or(true, |p| !(p.gen == l.gen && p.inverse != l.inverse)) {
            v.push(l);
        }
    }
    v
}

pub fn beta_sum(letters: &[Letter]) -> i64 {
    letters
        .iter()
        .filter(|l| l.gen == 0)
        .map(|l| if l.inverse { -1 } else { 1 })
        .sum()
}

pub fn has_alpha(letters: &[Letter]) -> bool {
    letters.iter().any(|l| l.gen != 0)
}

/// `u = v^k` for some `k ≥ 2` as sequences.
pub fn is_proper_power(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..n).filter(|p| n % p == 0).any(|p| (p..n).all(|i| letters[i] == letters[i - p]))
}

/// Integer determinant by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

pub fn gen_letter(g: Gen, e: i64) -> Vec<Letter> {
    (0..e.unsigned_abs()).map(|_| Letter::new(g, e < 0)).collect()
}
