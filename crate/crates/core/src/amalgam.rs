//! The amalgamated action of `G *_{c=d} H` on `Z`.
//!
//! `G` acts through its closed action directly; `H` acts through
//! `x ↦ σ⁻¹ h σ x` for an intertwiner `σ` with `σc = dσ`. Here `σ` is a
//! finitely supported permutation, the identity outside its support.
//!
//! Raw words use `a<i>`/`b` for the letters of `G` and `x<i>`/`y` for those
//! of `H`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::ClosedAction;
use crate::generic::{c_orbit, Interval};
use crate::word::{parse_letters, Alphabet, Letter, Word, BETA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    G,
    H,
}

impl Factor {
    pub fn alphabet(self) -> Alphabet {
        match self {
            Factor::G => Alphabet::First,
            Factor::H => Alphabet::Second,
        }
    }

    fn beta_name(self) -> char {
        match self {
            Factor::G => 'b',
            Factor::H => 'y',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawLetter {
    pub factor: Factor,
    pub letter: Letter,
}

/// A word over both factors, letters in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RawWord(pub Vec<RawLetter>);

impl RawWord {
    pub fn from_factor(factor: Factor, w: &Word) -> Self {
        RawWord(
            w.letters()
                .iter()
                .map(|&letter| RawLetter { factor, letter })
                .collect(),
        )
    }

    pub fn inverse(&self) -> Self {
        RawWord(
            self.0
                .iter()
                .rev()
                .map(|r| RawLetter {
                    factor: r.factor,
                    letter: r.letter.inv(),
                })
                .collect(),
        )
    }

    /// `self · rhs`; `rhs` acts first.
    pub fn mul(&self, rhs: &RawWord) -> RawWord {
        RawWord(rhs.0.iter().chain(self.0.iter()).copied().collect())
    }

    /// Maximal single-factor blocks in application order.
    pub fn blocks(&self) -> Vec<Syllable> {
        let mut out: Vec<Syllable> = Vec::new();
        for r in &self.0 {
            match out.last_mut() {
                Some(s) if s.factor == r.factor => {
                    let mut letters = s.word.letters().to_vec();
                    letters.push(r.letter);
                    s.word = Word::from_letters(letters);
                }
                _ => out.push(Syllable {
                    factor: r.factor,
                    word: Word::from_letters(vec![r.letter]),
                }),
            }
        }
        out
    }
}

impl FromStr for RawWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let written = parse_letters(s, |ch| match ch {
            'a' => Some((Factor::G, true)),
            'b' => Some((Factor::G, false)),
            'x' => Some((Factor::H, true)),
            'y' => Some((Factor::H, false)),
            _ => None,
        })?;
        Ok(RawWord(
            written
                .into_iter()
                .rev()
                .map(|(factor, letter)| RawLetter { factor, letter })
                .collect(),
        ))
    }
}

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, r) in self.0.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if r.letter.gen == BETA {
                write!(f, "{}", r.factor.beta_name())?;
            } else {
                write!(f, "{}", r.factor.alphabet().letter_name(r.letter.gen))?;
            }
            if r.letter.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub factor: Factor,
    pub word: Word,
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        RawWord::from_factor(self.factor, &self.word).fmt(f)
    }
}

/// `c^prefix · s_n ⋯ s_1` with `syllables[0] = s_1` acting first, factors
/// alternating, no syllable in `⟨c⟩` or `⟨d⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AmalgamWord {
    pub prefix: i64,
    pub syllables: Vec<Syllable>,
}

impl AmalgamWord {
    pub fn to_raw(&self, c: &Word) -> RawWord {
        let mut letters = Vec::new();
        for s in &self.syllables {
            letters.extend(RawWord::from_factor(s.factor, &s.word).0);
        }
        letters.extend(RawWord::from_factor(Factor::G, &c.pow(self.prefix)).0);
        RawWord(letters)
    }

    pub fn is_identity(&self) -> bool {
        self.prefix == 0 && self.syllables.is_empty()
    }

    /// Syllables alternate and none lies in the amalgamated subgroup.
    pub fn is_normal(&self, c: &Word, d: &Word) -> bool {
        self.syllables.windows(2).all(|p| p[0].factor != p[1].factor)
            && self.syllables.iter().all(|s| {
                let base = if s.factor == Factor::G { c } else { d };
                s.word.is_reduced() && s.word.is_power_of(base).is_none()
            })
    }
}

impl fmt::Display for AmalgamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.prefix != 0 {
            parts.push(format!("c^{}", self.prefix));
        }
        for s in self.syllables.iter().rev() {
            parts.push(format!("({s})"));
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" "))
    }
}

/// Splits into alternating syllables, moving every power of `c` (or `d`) to the
/// left through the identification `c = d`.
pub fn normal_form(raw: &RawWord, c: &Word, d: &Word) -> AmalgamWord {
    let base = |f: Factor| if f == Factor::G { c } else { d };
    let mut stack: Vec<Syllable> = Vec::new();
    let mut pending = 0i64;
    for block in raw.blocks() {
        let f = block.factor;
        let mut word = block.word.mul(&base(f).pow(pending));
        pending = 0;
        if stack.last().is_some_and(|top| top.factor == f) {
            let top = stack.pop().expect("nonempty");
            word = word.mul(&top.word);
        }
        let word = word.free_reduce();
        match word.is_power_of(base(f)) {
            Some(k) => pending = k,
            None => stack.push(Syllable { factor: f, word }),
        }
    }
    AmalgamWord {
        prefix: pending,
        syllables: stack,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMatch {
    pub size: usize,
    pub c_base: i64,
    pub d_base: i64,
}

/// The intertwiner: a finitely supported permutation of `Z` together with the
/// pairs that later steps must not move.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaState {
    fwd: BTreeMap<i64, i64>,
    bwd: BTreeMap<i64, i64>,
    orbit_matches: Vec<OrbitMatch>,
    pinned: BTreeMap<i64, i64>,
    transpositions: Vec<(i64, i64)>,
}

impl SigmaState {
    pub fn identity() -> Self {
        SigmaState::default()
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let mut s = SigmaState::default();
        for &(x, y) in pairs {
            if s.fwd.insert(x, y).is_some() || s.bwd.insert(y, x).is_some() {
                return Err(Error::SigmaCollision(x));
            }
        }
        if s.fwd.keys().collect::<BTreeSet<_>>() != s.bwd.keys().collect::<BTreeSet<_>>() {
            return Err(Error::Invariant("sigma pairs do not form a permutation".into()));
        }
        s.fwd.retain(|x, y| x != y);
        s.bwd.retain(|x, y| x != y);
        Ok(s)
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.fwd.get(&x).copied().unwrap_or(x)
    }

    pub fn apply_inv(&self, y: i64) -> i64 {
        self.bwd.get(&y).copied().unwrap_or(y)
    }

    /// Moved points with their images.
    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.fwd.iter().map(|(&x, &y)| (x, y))
    }

    pub fn orbit_matches(&self) -> &[OrbitMatch] {
        &self.orbit_matches
    }

    pub fn pinned(&self) -> &BTreeMap<i64, i64> {
        &self.pinned
    }

    /// Transpositions `(u v)` applied so far, in order, as `σ ← (u v) ∘ σ`.
    pub fn transpositions(&self) -> &[(i64, i64)] {
        &self.transpositions
    }

    /// Points of pinned pairs, on either side.
    pub fn forbidden(&self) -> BTreeSet<i64> {
        self.pinned
            .iter()
            .flat_map(|(&x, &y)| [x, y])
            .collect()
    }

    pub fn max_point(&self) -> Option<i64> {
        let a = self.fwd.keys().next_back().copied();
        let b = self.pinned.keys().chain(self.pinned.values()).max().copied();
        a.max(b)
    }

    fn set(&mut self, x: i64, y: i64) {
        if x == y {
            self.fwd.remove(&x);
        } else {
            self.fwd.insert(x, y);
        }
        if x == y {
            self.bwd.remove(&y);
        } else {
            self.bwd.insert(y, x);
        }
    }

    /// `σ ← (u v) ∘ σ`.
    fn swap_range(&mut self, u: i64, v: i64) {
        if u == v {
            return;
        }
        let (pu, pv) = (self.apply_inv(u), self.apply_inv(v));
        self.set(pu, v);
        self.set(pv, u);
        self.transpositions.push((u, v));
    }

    /// Makes `σ(p) = q` by swapping `σ(p)` with `q` on the range side.
    ///
    /// Both must be `d`-fixed for `σc = dσ` to survive; neither `p` nor the
    /// current preimage of `q` may be pinned.
    pub fn assign(&mut self, p: i64, q: i64, ha: &ClosedAction, d: &Word) -> Result<()> {
        let sp = self.apply(p);
        if ha.evaluate(d, sp) != sp {
            return Err(Error::NotFixed(sp));
        }
        if ha.evaluate(d, q) != q {
            return Err(Error::NotFixed(q));
        }
        if self.pinned.get(&p).is_some_and(|&y| y != q) {
            return Err(Error::SigmaCollision(p));
        }
        let pre = self.apply_inv(q);
        if pre != p && self.pinned.contains_key(&pre) {
            return Err(Error::SigmaCollision(q));
        }
        self.swap_range(sp, q);
        self.pinned.insert(p, q);
        Ok(())
    }

    pub fn to_snapshot(&self) -> SigmaSnapshot {
        SigmaSnapshot {
            pairs: self.pairs().map(|(x, y)| [x, y]).collect(),
            orbit_matches: self.orbit_matches.clone(),
            pinned: self.pinned.iter().map(|(&x, &y)| [x, y]).collect(),
            transpositions: self.transpositions.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_snapshot(s: &SigmaSnapshot) -> Result<Self> {
        let pairs: Vec<(i64, i64)> = s.pairs.iter().map(|p| (p[0], p[1])).collect();
        let mut out = SigmaState::from_pairs(&pairs)?;
        out.orbit_matches = s.orbit_matches.clone();
        out.pinned = s.pinned.iter().map(|p| (p[0], p[1])).collect();
        out.transpositions = s.transpositions.iter().map(|p| (p[0], p[1])).collect();
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSnapshot {
    pub pairs: Vec<[i64; 2]>,
    pub orbit_matches: Vec<OrbitMatch>,
    #[serde(default)]
    pub pinned: Vec<[i64; 2]>,
    #[serde(default)]
    pub transpositions: Vec<[i64; 2]>,
}

/// The two factor actions, their amalgamating words and a window containing
/// every support.
#[derive(Clone, Copy, Debug)]
pub struct Factors<'a> {
    pub ga: &'a ClosedAction,
    pub ha: &'a ClosedAction,
    pub c: &'a Word,
    pub d: &'a Word,
    pub window: Interval,
}

impl Factors<'_> {
    pub fn base(&self, f: Factor) -> &Word {
        match f {
            Factor::G => self.c,
            Factor::H => self.d,
        }
    }

    pub fn action(&self, f: Factor) -> &ClosedAction {
        match f {
            Factor::G => self.ga,
            Factor::H => self.ha,
        }
    }
}

/// `{x ∈ window : c·x = x, c·g·x = g·x, g·x ≠ x}`.
pub fn witness_set(a: &ClosedAction, c: &Word, g: &Word, window: Interval) -> Result<Vec<i64>> {
    if g.is_power_of(c).is_some() {
        return Err(Error::InCyclicSubgroup {
            word: g.to_string(),
            base: c.to_string(),
        });
    }
    Ok(window
        .points()
        .filter(|&x| {
            let gx = a.evaluate(g, x);
            a.evaluate(c, x) == x && a.evaluate(c, gx) == gx && gx != x
        })
        .collect())
}

fn nontrivial_orbits(a: &ClosedAction, c: &Word, region: Interval) -> Result<Vec<Vec<i64>>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in region.points() {
        if seen.contains(&x) || a.evaluate(c, x) == x {
            continue;
        }
        let orbit = c_orbit(a, c, x, region.len()).ok_or(Error::OrbitEscapesRegion(x))?;
        if let Some(&y) = orbit.iter().find(|&&y| !region.contains(y)) {
            return Err(Error::OrbitEscapesRegion(y));
        }
        seen.extend(orbit.iter().copied());
        out.push(orbit);
    }
    out.sort_by_key(|o| (o.len(), o[0]));
    Ok(out)
}

/// Census of nontrivial orbits by size.
pub fn nontrivial_census(a: &ClosedAction, c: &Word, region: Interval) -> Result<BTreeMap<usize, usize>> {
    let mut census = BTreeMap::new();
    for o in nontrivial_orbits(a, c, region)? {
        *census.entry(o.len()).or_insert(0) += 1;
    }
    Ok(census)
}

/// A permutation `σ` with `σc = dσ` on all of `Z`.
///
/// Nontrivial `⟨c⟩`-orbits are matched with nontrivial `⟨d⟩`-orbits of the same
/// size, smallest point to smallest point. Points moved by `d` but not by `c`
/// go, in increasing order, to points moved by `c` but not by `d`; all other
/// points are fixed. Both supports must lie in `region`.
pub fn match_orbits_sigma(f: &Factors, region: Interval) -> Result<SigmaState> {
    let co = nontrivial_orbits(f.ga, f.c, region)?;
    let dor = nontrivial_orbits(f.ha, f.d, region)?;
    let count = |os: &[Vec<i64>]| {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for o in os {
            *m.entry(o.len()).or_insert(0) += 1;
        }
        m
    };
    let (cc, dc) = (count(&co), count(&dor));
    let sizes: BTreeSet<usize> = cc.keys().chain(dc.keys()).copied().collect();
    for size in sizes {
        let (a, b) = (cc.get(&size).copied().unwrap_or(0), dc.get(&size).copied().unwrap_or(0));
        if a != b {
            return Err(Error::CensusMismatch {
                size,
                c_count: a,
                d_count: b,
            });
        }
    }
    let mut map: BTreeMap<i64, i64> = BTreeMap::new();
    let mut matches = Vec::new();
    for (oc, od) in co.iter().zip(&dor) {
        for (&x, &y) in oc.iter().zip(od) {
            map.insert(x, y);
        }
        matches.push(OrbitMatch {
            size: oc.len(),
            c_base: oc[0],
            d_base: od[0],
        });
    }
    let nc: BTreeSet<i64> = co.iter().flatten().copied().collect();
    let nd: BTreeSet<i64> = dor.iter().flatten().copied().collect();
    let from: Vec<i64> = nd.difference(&nc).copied().collect();
    let to: Vec<i64> = nc.difference(&nd).copied().collect();
    for (&x, &y) in from.iter().zip(&to) {
        map.insert(x, y);
    }
    let pairs: Vec<(i64, i64)> = map.into_iter().collect();
    let mut sigma = SigmaState::from_pairs(&pairs)?;
    sigma.orbit_matches = matches;
    Ok(sigma)
}

/// Points `x` of the window with `σ(c·x) ≠ d·σ(x)`.
pub fn intertwining_violations(sigma: &SigmaState, f: &Factors) -> Vec<i64> {
    f.window
        .points()
        .filter(|&x| sigma.apply(f.ga.evaluate(f.c, x)) != f.ha.evaluate(f.d, sigma.apply(x)))
        .collect()
}

/// `w·x` in the amalgam.
pub fn evaluate_raw(sigma: &SigmaState, f: &Factors, w: &RawWord, x: i64) -> i64 {
    w.blocks()
        .iter()
        .fold(x, |y, s| evaluate_syllable(sigma, f, s, y))
}

fn evaluate_syllable(sigma: &SigmaState, f: &Factors, s: &Syllable, x: i64) -> i64 {
    match s.factor {
        Factor::G => f.ga.evaluate(&s.word, x),
        Factor::H => sigma.apply_inv(f.ha.evaluate(&s.word, sigma.apply(x))),
    }
}

pub fn evaluate_amalgam(sigma: &SigmaState, f: &Factors, w: &AmalgamWord, x: i64) -> i64 {
    let y = w
        .syllables
        .iter()
        .fold(x, |y, s| evaluate_syllable(sigma, f, s, y));
    f.ga.evaluate(&f.c.pow(w.prefix), y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedWitness {
    pub x0: i64,
    pub chain: Vec<i64>,
    pub image: i64,
}

/// Extends `σ` so that `w` moves a fresh point.
///
/// The chain starts in `Fix(c)` (or in the witness set of the first syllable
/// when that lies in `G`), and each syllable steps through a fresh point of its
/// witness set, with `σ` reassigned between the factors. On error `sigma` is
/// left unchanged.
pub fn force_amalgam_witness(
    sigma: &mut SigmaState,
    w: &AmalgamWord,
    f: &Factors,
) -> Result<ForcedWitness> {
    if !w.is_normal(f.c, f.d) {
        let bad = w
            .syllables
            .iter()
            .find(|s| s.word.is_power_of(f.base(s.factor)).is_some())
            .map_or_else(|| w.to_string(), |s| s.to_string());
        return Err(Error::InCyclicSubgroup {
            word: bad,
            base: "the amalgamated subgroup".into(),
        });
    }
    if w.syllables.is_empty() {
        if w.prefix == 0 {
            return Err(Error::EmptyWord);
        }
        let ck = f.c.pow(w.prefix);
        let x = f
            .window
            .points()
            .find(|&x| f.ga.evaluate(&ck, x) != x)
            .ok_or_else(|| Error::DepletedWitnesses(w.to_string()))?;
        let image = f.ga.evaluate(&ck, x);
        return Ok(ForcedWitness {
            x0: x,
            chain: vec![x, image],
            image,
        });
    }

    let mut s = sigma.clone();
    let mut used = s.forbidden();
    let mut fresh_floor = f.window.hi.max(s.max_point().unwrap_or(i64::MIN)) + 1;
    let mut fresh = |used: &mut BTreeSet<i64>| {
        while used.contains(&fresh_floor) {
            fresh_floor += 1;
        }
        used.insert(fresh_floor);
        fresh_floor
    };
    let witnesses = |syl: &Syllable| -> Result<Vec<i64>> {
        witness_set(f.action(syl.factor), f.base(syl.factor), &syl.word, f.window)
    };
    // picks the first witness r with r, g·r unused and an admissible σ-step
    let pick = |syl: &Syllable, used: &BTreeSet<i64>, ok: &dyn Fn(i64, i64) -> bool| -> Result<(i64, i64)> {
        let a = f.action(syl.factor);
        witnesses(syl)?
            .into_iter()
            .map(|r| (r, a.evaluate(&syl.word, r)))
            .find(|&(r, gr)| !used.contains(&r) && !used.contains(&gr) && ok(r, gr))
            .ok_or_else(|| Error::DepletedWitnesses(syl.to_string()))
    };

    let mut chain = Vec::new();
    let mut syllables = w.syllables.iter();
    let first = &w.syllables[0];
    let x0;
    let mut cur;
    if first.factor == Factor::G {
        let (r, gr) = pick(first, &used, &|_, _| true)?;
        used.extend([r, gr]);
        chain.extend([r, gr]);
        x0 = r;
        cur = gr;
        syllables.next();
    } else {
        x0 = fresh(&mut used);
        chain.push(x0);
        cur = x0;
    }
    let mut pending: Option<i64> = None;
    for syl in syllables {
        match syl.factor {
            Factor::H => {
                let p = cur;
                let probe = |q: i64, _: i64| {
                    let mut t = s.clone();
                    t.assign(p, q, f.ha, f.d).is_ok()
                };
                let (q, hq) = pick(syl, &used, &probe)?;
                s.assign(p, q, f.ha, f.d)?;
                used.extend([q, hq]);
                chain.extend([q, hq]);
                pending = Some(hq);
            }
            Factor::G => {
                let target = pending.take().expect("G follows H");
                let probe = |r: i64, _: i64| {
                    let mut t = s.clone();
                    t.assign(r, target, f.ha, f.d).is_ok()
                };
                let (r, gr) = pick(syl, &used, &probe)?;
                s.assign(r, target, f.ha, f.d)?;
                used.extend([r, gr]);
                chain.extend([r, gr]);
                cur = gr;
            }
        }
    }
    if let Some(target) = pending {
        let r = fresh(&mut used);
        s.assign(r, target, f.ha, f.d)?;
        chain.push(r);
        cur = r;
    }

    let image = evaluate_amalgam(&s, f, w, x0);
    let distinct: BTreeSet<i64> = chain.iter().copied().collect();
    if image != cur || image == x0 || distinct.len() != chain.len() {
        return Err(Error::Invariant(format!(
            "forcing chain for {w} failed: x0 = {x0}, image = {image}, expected {cur}"
        )));
    }
    *sigma = s;
    Ok(ForcedWitness { x0, chain, image })
}

/// Sets `σ(a_i) = b_i` for `c`-fixed `a_i` and `d`-fixed `b_i`.
pub fn match_folner_sigma(sigma: &mut SigmaState, a_set: &[i64], b_set: &[i64], f: &Factors) -> Result<()> {
    if a_set.len() != b_set.len() {
        return Err(Error::SizeMismatch(a_set.len(), b_set.len()));
    }
    if let Some(&x) = a_set.iter().find(|&&x| f.ga.evaluate(f.c, x) != x) {
        return Err(Error::NotFixed(x));
    }
    if let Some(&y) = b_set.iter().find(|&&y| f.ha.evaluate(f.d, y) != y) {
        return Err(Error::NotFixed(y));
    }
    let forbidden = sigma.forbidden();
    if let Some(&x) = a_set.iter().chain(b_set).find(|x| forbidden.contains(x)) {
        return Err(Error::SigmaCollision(x));
    }
    let mut s = sigma.clone();
    for (&a, &b) in a_set.iter().zip(b_set) {
        s.assign(a, b, f.ha, f.d)?;
    }
    *sigma = s;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::ActionState;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn raw(s: &str) -> RawWord {
        s.parse().unwrap()
    }

    #[test]
    fn raw_parse_and_print() {
        let r = raw("a1 b x1^-1 y^2");
        assert_eq!(r.to_string(), "a1 b x1^-1 y y");
        assert_eq!(r.0[0].factor, Factor::H);
        assert_eq!(r.0[0].letter, Letter::pos(BETA));
        assert_eq!(r.blocks().len(), 2);
    }

    #[test]
    fn normal_form_examples() {
        let c = w("a1 b a1^-1 b^-1");
        let d = Word::parse_with("b x1 b^-1 x1^-1", Alphabet::Second).unwrap();
        let nf = normal_form(&raw("a1 x1"), &c, &d);
        assert_eq!(nf.prefix, 0);
        assert_eq!(nf.syllables.len(), 2);
        assert_eq!(nf.syllables[0].factor, Factor::H);

        let nf = normal_form(&raw("a1 b a1^-1 b^-1 x1"), &c, &d);
        assert_eq!(nf.prefix, 1);
        assert_eq!(nf.syllables.len(), 1);

        // a1 · d · a1^-1 = a1 c a1^-1 stays in G
        let nf = normal_form(&raw("a1 y x1 y^-1 x1^-1 a1^-1"), &c, &d);
        assert_eq!(nf.syllables.len(), 1);
        assert_eq!(nf.syllables[0].factor, Factor::G);
        assert_eq!(nf.syllables[0].word, w("a1").mul(&c).mul(&w("a1^-1")));

        assert!(normal_form(&raw("a1 a1^-1 x1 x1^-1"), &c, &d).is_identity());
    }

    #[test]
    fn sigma_transposition_keeps_permutation() {
        let mut s = SigmaState::from_pairs(&[(0, 1), (1, 0)]).unwrap();
        s.swap_range(1, 5);
        assert_eq!(s.apply(0), 5);
        assert_eq!(s.apply(1), 0);
        assert_eq!(s.apply_inv(5), 0);
        assert_eq!(s.apply(5), 1);
        assert!(SigmaState::from_pairs(&[(0, 1)]).is_err());
    }

    fn toy_factors() -> (ClosedAction, ClosedAction, Word, Word) {
        let c = w("a1 b a1^-1 b^-1");
        let mut g = ActionState::new(1, 0);
        g.embed_cycle(&c.pow(2), &BTreeSet::new()).unwrap();
        for word in ["a1", "b", "a1 b"] {
            g.embed_q_witness(&c, &w(word), &BTreeSet::new()).unwrap();
        }
        let h = g.transported(500, 1, &[1]).unwrap();
        let d = c.inverse();
        (g.close(), h.close(), c, d)
    }

    #[test]
    fn matched_sigma_intertwines() {
        let (ga, ha, c, d) = toy_factors();
        let f = Factors {
            ga: &ga,
            ha: &ha,
            c: &c,
            d: &d,
            window: Interval::new(-10, 700),
        };
        let sigma = match_orbits_sigma(&f, f.window).unwrap();
        assert!(intertwining_violations(&sigma, &f).is_empty());
        let cw = RawWord::from_factor(Factor::G, &c);
        let dw = RawWord::from_factor(Factor::H, &d);
        for x in f.window.points() {
            assert_eq!(evaluate_raw(&sigma, &f, &cw, x), evaluate_raw(&sigma, &f, &dw, x));
        }
    }

    #[test]
    fn empty_actions_give_identity() {
        let a = ClosedAction::identity(1);
        let c = w("a1 b a1^-1 b^-1");
        let f = Factors {
            ga: &a,
            ha: &a,
            c: &c,
            d: &c,
            window: Interval::new(0, 10),
        };
        let s = match_orbits_sigma(&f, f.window).unwrap();
        assert_eq!(s.pairs().count(), 0);
    }

    #[test]
    fn forcing_small_words() {
        let (ga, ha, c, d) = toy_factors();
        let f = Factors {
            ga: &ga,
            ha: &ha,
            c: &c,
            d: &d,
            window: Interval::new(-10, 700),
        };
        let sigma = match_orbits_sigma(&f, f.window).unwrap();
        for text in ["a1 x1", "x1", "a1", "x1 a1", "a1 x1 b y", "c"] {
            let r = if text == "c" {
                RawWord::from_factor(Factor::G, &c)
            } else {
                raw(text)
            };
            let nf = normal_form(&r, &c, &d);
            let mut s = sigma.clone();
            let fw = force_amalgam_witness(&mut s, &nf, &f).unwrap();
            assert_ne!(evaluate_raw(&s, &f, &r, fw.x0), fw.x0, "{text}");
            assert!(intertwining_violations(&s, &f).is_empty(), "{text}");
        }
    }

    #[test]
    fn folner_matching() {
        let (ga, ha, c, d) = toy_factors();
        let f = Factors {
            ga: &ga,
            ha: &ha,
            c: &c,
            d: &d,
            window: Interval::new(-10, 700),
        };
        let mut sigma = match_orbits_sigma(&f, f.window).unwrap();
        let a: Vec<i64> = (800..810).collect();
        let b: Vec<i64> = (900..910).collect();
        match_folner_sigma(&mut sigma, &a, &b, &f).unwrap();
        assert!(a.iter().zip(&b).all(|(&x, &y)| sigma.apply(x) == y));
        assert!(intertwining_violations(&sigma, &f).is_empty());
        assert!(matches!(
            match_folner_sigma(&mut sigma, &a[..3], &b[..2], &f),
            Err(Error::SizeMismatch(3, 2))
        ));
    }

    #[test]
    fn snapshot_round_trip() {
        let mut s = SigmaState::from_pairs(&[(0, 1), (1, 0)]).unwrap();
        s.swap_range(1, 5);
        let back = SigmaState::from_snapshot(&s.to_snapshot()).unwrap();
        assert_eq!(back, s);
    }
}
