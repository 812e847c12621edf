//! Census padding: small standalone blocks that add known nontrivial
//! `⟨c⟩`-orbits to a factor action without disturbing the orbits already there.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amalgam::nontrivial_census;
use crate::error::{Error, Result};
use crate::extension::{ActionState, ClosedAction, FinitePerm};
use crate::generic::{beta_prefix_sums, Interval};
use crate::graph::LabeledGraph;
use crate::word::{Gen, Word, BETA};

pub type Census = BTreeMap<usize, usize>;

/// `α`-permutations of the block `0..len`, one per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub len: usize,
    pub perms: Vec<Vec<usize>>,
    pub census: Census,
}

/// How far one application of `c` can carry a point along `β`.
pub fn reach(c: &Word) -> i64 {
    let sums = beta_prefix_sums(c);
    let lo = sums.iter().min().copied().unwrap_or(0);
    let hi = sums.iter().max().copied().unwrap_or(0);
    hi - lo
}

/// Empty points to leave between a gadget and anything else.
pub fn buffer(c: &Word) -> i64 {
    2 * reach(c) + 2
}

fn closed(rank: usize, perms: &[Vec<usize>]) -> ClosedAction {
    ClosedAction {
        rank,
        alphas: perms
            .iter()
            .map(|p| {
                FinitePerm::from_map(
                    p.iter()
                        .enumerate()
                        .filter(|&(i, &j)| i != j)
                        .map(|(i, &j)| (i as i64, j as i64))
                        .collect(),
                )
            })
            .collect(),
    }
}

/// Nontrivial `⟨c⟩`-orbits of the block in isolation.
pub fn isolated_census(c: &Word, rank: usize, len: usize, perms: &[Vec<usize>]) -> Result<Census> {
    let r = reach(c) + 1;
    nontrivial_census(&closed(rank, perms), c, Interval::new(-r, len as i64 - 1 + r))
}

fn random_perm(rng: &mut ChaCha8Rng, len: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    if rng.gen_bool(0.5) {
        p.shuffle(rng);
    } else {
        for _ in 0..rng.gen_range(1..=2) {
            let (i, j) = (rng.gen_range(0..len), rng.gen_range(0..len));
            p.swap(i, j);
        }
    }
    p
}

fn covers(need: &Census, census: &Census) -> bool {
    census.iter().all(|(s, &k)| need.get(s).copied().unwrap_or(0) >= k)
}

fn excess(need: &Census, census: &Census) -> usize {
    census
        .iter()
        .map(|(s, &k)| s * k.saturating_sub(need.get(s).copied().unwrap_or(0)))
        .sum()
}

/// A gadget with an orbit of size `size`, preferring one whose census fits
/// inside `need`; otherwise the one with the least overshoot.
pub fn find_gadget(
    c: &Word,
    rank: usize,
    size: usize,
    need: &Census,
    trials: usize,
    seed: u64,
) -> Result<Option<Gadget>> {
    let gens: BTreeSet<Gen> = c.letters().iter().map(|l| l.gen).filter(|&g| g != BETA).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (size as u64).wrapping_mul(0x9e37_79b9));
    let mut best: Option<(usize, Gadget)> = None;
    for _ in 0..trials {
        let len = rng.gen_range(2..=size.max(2) + 2);
        let perms: Vec<Vec<usize>> = (1..=rank)
            .map(|g| {
                if gens.contains(&g) {
                    random_perm(&mut rng, len)
                } else {
                    (0..len).collect()
                }
            })
            .collect();
        let census = isolated_census(c, rank, len, &perms)?;
        if !census.contains_key(&size) {
            continue;
        }
        let gadget = Gadget { len, perms, census };
        if covers(need, &gadget.census) {
            return Ok(Some(gadget));
        }
        let over = excess(need, &gadget.census);
        if best.as_ref().map_or(true, |(b, _)| over < *b) {
            best = Some((over, gadget));
        }
    }
    Ok(best.map(|(_, g)| g))
}

/// Embeds the gadget above `floor` and a buffer; returns its first point.
pub fn embed_gadget(state: &mut ActionState, c: &Word, gadget: &Gadget, floor: i64) -> Result<i64> {
    let mut g = LabeledGraph::new();
    for v in 0..gadget.len as i64 {
        g.add_vertex(v);
        if v > 0 {
            g.add_edge(v - 1, v, BETA);
        }
    }
    for (i, p) in gadget.perms.iter().enumerate() {
        for (x, &y) in p.iter().enumerate().filter(|&(x, &y)| x != y) {
            g.add_edge(x as i64, y as i64, i + 1);
        }
    }
    let top = floor.max(state.next_free()) + buffer(c);
    let map = state.embed_graph(&g, &BTreeSet::from([top]))?;
    Ok(map[&0])
}

fn sub(need: &mut Census, census: &Census) -> Census {
    let mut over = Census::new();
    for (&s, &k) in census {
        let have = need.get(&s).copied().unwrap_or(0);
        if have > k {
            need.insert(s, have - k);
        } else {
            need.remove(&s);
            if k > have {
                over.insert(s, k - have);
            }
        }
    }
    over
}

fn add(need: &mut Census, census: &Census) {
    for (&s, &k) in census {
        *need.entry(s).or_insert(0) += k;
    }
}

/// Pads two actions until their nontrivial censuses agree.
///
/// Every gadget goes above `floor` and above everything allocated in either
/// state. Overshoot on one side becomes a need on the other. Fails with
/// `CensusMismatch` if no gadget is found or `max_gadgets` searches run out.
/// Returns the number of searches.
pub fn balance(
    first: (&mut ActionState, &Word),
    second: (&mut ActionState, &Word),
    census: (&Census, &Census),
    floor: i64,
    trials: usize,
    max_gadgets: usize,
    seed: u64,
) -> Result<usize> {
    let (sa, c) = first;
    let (sb, d) = second;
    let mut need_a = Census::new();
    let mut need_b = Census::new();
    let sizes: BTreeSet<usize> = census.0.keys().chain(census.1.keys()).copied().collect();
    for s in sizes {
        let (x, y) = (census.0.get(&s).copied().unwrap_or(0), census.1.get(&s).copied().unwrap_or(0));
        if x < y {
            need_a.insert(s, y - x);
        } else if y < x {
            need_b.insert(s, x - y);
        }
    }
    let mut used = 0;
    while !(need_a.is_empty() && need_b.is_empty()) {
        let on_a = !need_a.is_empty();
        let base = floor.max(sa.next_free()).max(sb.next_free());
        let (need, other, state, word) = if on_a {
            (&mut need_a, &mut need_b, &mut *sa, c)
        } else {
            (&mut need_b, &mut need_a, &mut *sb, d)
        };
        let (&size, _) = need.iter().next_back().expect("nonempty");
        let mismatch = || Error::CensusMismatch {
            size,
            c_count: census.0.get(&size).copied().unwrap_or(0),
            d_count: census.1.get(&size).copied().unwrap_or(0),
        };
        if used == max_gadgets {
            return Err(mismatch());
        }
        let gadget =
            find_gadget(word, state.rank(), size, need, trials, seed.wrapping_add(used as u64))?.ok_or_else(mismatch)?;
        // a fitting gadget is reused for as long as it keeps fitting
        let copies = gadget
            .census
            .iter()
            .map(|(s, &k)| need.get(s).copied().unwrap_or(0) / k)
            .min()
            .unwrap_or(1)
            .max(1);
        let mut floor = base;
        for _ in 0..copies {
            let over = sub(need, &gadget.census);
            add(other, &over);
            embed_gadget(state, word, &gadget, floor)?;
            floor = state.next_free();
        }
        used += 1;
    }
    Ok(used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator() -> Word {
        "a1 b a1^-1 b^-1".parse().unwrap()
    }

    #[test]
    fn transposition_gives_three_cycle() {
        // conjugating a transposition by the shift and dividing gives a 3-cycle
        let census = isolated_census(&commutator(), 1, 2, &[vec![1, 0]]).unwrap();
        assert_eq!(census, Census::from([(3, 1)]));
    }

    #[test]
    fn gadget_adds_exactly_its_census() {
        let c = commutator();
        let mut state = ActionState::new(1, 0);
        state.embed_cycle(&c.pow(2), &BTreeSet::new()).unwrap();
        let region = |s: &ActionState| Interval::new(-10, s.next_free() + 10);
        let before = nontrivial_census(&state.close(), &c, region(&state)).unwrap();
        let need = Census::from([(5, 1)]);
        let g = find_gadget(&c, 1, 5, &need, 5000, 7).unwrap().unwrap();
        assert!(g.census.contains_key(&5));
        embed_gadget(&mut state, &c, &g, 0).unwrap();
        let mut after = before.clone();
        add(&mut after, &g.census);
        assert_eq!(nontrivial_census(&state.close(), &c, region(&state)).unwrap(), after);
        assert!(state.audit().is_ok());
    }

    #[test]
    fn balancing_two_commutators() {
        let c: Word = "a1 b a1^-1 b^-1 a2 a3 a2^-1 a3^-1".parse().unwrap();
        let d: Word = "b a1 b^-1 a1^-1".parse().unwrap();
        let mut sa = ActionState::new(3, 0);
        sa.embed_cycle(&c.pow(3), &BTreeSet::new()).unwrap();
        let mut sb = ActionState::new(1, 100);
        sb.embed_cycle(&d.pow(2), &BTreeSet::new()).unwrap();
        let region = Interval::new(-20, 100);
        let ca = nontrivial_census(&sa.close(), &c, region).unwrap();
        let cb = nontrivial_census(&sb.close(), &d, Interval::new(80, 200)).unwrap();
        balance((&mut sa, &c), (&mut sb, &d), (&ca, &cb), 200, 5000, 200, 1).unwrap();
        let hi = sa.next_free().max(sb.next_free()) + 20;
        let window = Interval::new(-20, hi);
        assert_eq!(
            nontrivial_census(&sa.close(), &c, window).unwrap(),
            nontrivial_census(&sb.close(), &d, window).unwrap()
        );
    }
}
