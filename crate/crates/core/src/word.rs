//! Words over `{α_1, …, α_n, β}`.
//!
//! A [`Word`] stores its letters in application order: for the written word
//! `w = w_m ⋯ w_1`, `letters()[0]` is `w_1`, the letter that acts first. The
//! text syntax follows the written order, so `"a1 b a1^-1"` parses to the
//! letters `[a1^-1, b, a1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Generator id: `0` is `β`, `i ≥ 1` is `α_i`.
pub type Gen = usize;

pub const BETA: Gen = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(gen: Gen, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub const fn pos(gen: Gen) -> Self {
        Letter::new(gen, false)
    }

    pub const fn neg(gen: Gen) -> Self {
        Letter::new(gen, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.gen, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn is_beta(self) -> bool {
        self.gen == BETA
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// Which factor's spelling a word uses when printed or parsed.
///
/// Both factors spell `β` as `b`; the first factor's `α_i` is `a<i>`, the
/// second factor's is `x<i>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Alphabet {
    #[default]
    First,
    Second,
}

impl Alphabet {
    pub fn alpha_prefix(self) -> char {
        match self {
            Alphabet::First => 'a',
            Alphabet::Second => 'x',
        }
    }

    pub fn letter_name(self, gen: Gen) -> String {
        if gen == BETA {
            "b".to_string()
        } else {
            format!("{}{}", self.alpha_prefix(), gen)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub total: i64,
    pub positive: i64,
    pub negative: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from letters in application order.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from letters in written (left-to-right) order.
    pub fn from_written(mut letters: Vec<Letter>) -> Self {
        letters.reverse();
        Word(letters)
    }

    pub fn letter(gen: Gen) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    pub fn beta_power(k: i64) -> Self {
        Word::letter(BETA).pow(k)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator id occurring, if any.
    pub fn max_gen(&self) -> Option<Gen> {
        self.0.iter().map(|l| l.gen).max()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// The product `self · rhs`; `rhs` acts first. No reduction is performed.
    pub fn mul(&self, rhs: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + rhs.len());
        letters.extend_from_slice(&rhs.0);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    /// `self^k` spelled by concatenation (no reduction).
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.0);
        }
        Word(letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    /// Reduced, and the first and last letters are not mutually inverse.
    ///
    /// The first and last letters may coincide, so this is also what is
    /// sometimes called weakly cyclically reduced.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&first), Some(&last)) if self.len() > 1 => !first.cancels(last),
                _ => true,
            }
    }

    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word(stack)
    }

    /// Returns `(conjugator, core)` with `self = conjugator · core · conjugator⁻¹`
    /// after free reduction and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let r = self.free_reduce().0;
        let (mut i, mut j) = (0, r.len());
        while j - i >= 2 && r[j - 1].cancels(r[i]) {
            i += 1;
            j -= 1;
        }
        (Word(r[j..].to_vec()), Word(r[i..j].to_vec()))
    }

    /// Exponent sums of `gen` on the given spelling.
    pub fn exponent_sums(&self, gen: Gen) -> ExponentReport {
        let (mut positive, mut negative) = (0, 0);
        for l in self.0.iter().filter(|l| l.gen == gen) {
            if l.inverse {
                negative -= 1;
            } else {
                positive += 1;
            }
        }
        ExponentReport {
            total: positive + negative,
            positive,
            negative,
        }
    }

    /// Exponent-sum vector over generators `0..rank`.
    pub fn abelianization(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            if l.gen < rank {
                v[l.gen] += l.sign();
            }
        }
        v
    }

    pub fn contains_gen(&self, gen: Gen) -> bool {
        self.0.iter().any(|l| l.gen == gen)
    }

    pub fn contains_alpha(&self) -> bool {
        self.0.iter().any(|l| !l.is_beta())
    }

    /// Whether the reduced form lies in `⟨β⟩`.
    pub fn in_beta_subgroup(&self) -> bool {
        !self.free_reduce().contains_alpha()
    }

    /// `Some(k)` iff `self` and `c^k` have the same reduced form.
    pub fn is_power_of(&self, c: &Word) -> Option<i64> {
        let w = self.free_reduce();
        if w.is_empty() {
            return Some(0);
        }
        let c = c.free_reduce();
        if c.is_empty() {
            return None;
        }
        let c_inv = c.inverse();
        let (mut up, mut down) = (Word::identity(), Word::identity());
        // |c^k| >= k once reduced, so k never needs to exceed |w|.
        for k in 1..=w.len() as i64 {
            up = c.mul(&up).free_reduce();
            down = c_inv.mul(&down).free_reduce();
            if up == w {
                return Some(k);
            }
            if down == w {
                return Some(-k);
            }
        }
        None
    }

    /// All cyclic rotations of the spelling, starting with `self`.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len().max(1)).map(move |i| {
            let mut letters = self.0[i..].to_vec();
            letters.extend_from_slice(&self.0[..i]);
            Word(letters)
        })
    }

    pub fn display_with(&self, alphabet: Alphabet) -> WordDisplay<'_> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }

    pub fn parse_with(input: &str, alphabet: Alphabet) -> Result<Word> {
        parse_letters(input, |c| {
            if c == 'b' {
                Some(((), false))
            } else if c == alphabet.alpha_prefix() {
                Some(((), true))
            } else {
                None
            }
        })
        .map(|written| Word::from_written(written.into_iter().map(|(_, l)| l).collect()))
    }
}

/// True iff the cyclic reductions of `u` and `v` are rotations of one another.
pub fn cyclic_conjugacy_check(u: &Word, v: &Word) -> bool {
    let (_, cu) = u.cyclic_reduce();
    let (_, cv) = v.cyclic_reduce();
    if cu.len() != cv.len() {
        return false;
    }
    if cu.is_empty() {
        return true;
    }
    let doubled: Vec<Letter> = cu.0.iter().chain(cu.0.iter()).copied().collect();
    doubled.windows(cv.len()).any(|w| w == cv.letters())
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.alphabet.letter_name(l.gen))?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(Alphabet::First).fmt(f)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse_with(s, Alphabet::First)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Tokenizer shared by the factor and amalgam parsers.
///
/// `classify` maps a leading character to `Some((tag, indexed))`, where
/// `indexed` marks an `α`-type letter that takes an index and otherwise the
/// letter is `β`; `None` rejects the character. Tags are handed back with each
/// letter in written order.
pub(crate) fn parse_letters<T: Copy>(
    input: &str,
    classify: impl Fn(char) -> Option<(T, bool)>,
) -> Result<Vec<(T, Letter)>> {
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let read_int = |i: &mut usize, allow_sign: bool| -> Option<i64> {
        let start = *i;
        if allow_sign && *i < chars.len() && chars[*i] == '-' {
            *i += 1;
        }
        let digits_start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == digits_start {
            *i = start;
            return None;
        }
        chars[start..*i].iter().collect::<String>().parse().ok()
    };
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() || ch == '*' || ch == '.' || ch == '·' {
            i += 1;
            continue;
        }
        if (ch == '1' || ch == 'e') && out.is_empty() && chars[i + 1..].iter().all(|c| c.is_whitespace()) {
            return Ok(out);
        }
        let kind = classify(ch).ok_or_else(|| err(&format!("unexpected character {ch:?}")))?;
        i += 1;
        let (tag, gen) = match kind {
            (tag, false) => (tag, BETA),
            (tag, true) => {
                let idx = read_int(&mut i, false).ok_or_else(|| err("missing generator index"))?;
                if idx < 1 {
                    return Err(err("generator indices start at 1"));
                }
                (tag, idx as Gen)
            }
        };
        let mut exp = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            exp = read_int(&mut i, true).ok_or_else(|| err("missing exponent"))?;
        }
        let letter = Letter::new(gen, exp < 0);
        for _ in 0..exp.unsigned_abs() {
            out.push((tag, letter));
        }
    }
    Ok(out)
}

/// Commutator `[u, v] = u v u⁻¹ v⁻¹`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.mul(v).mul(&u.inverse()).mul(&v.inverse())
}

/// All freely reduced words of length exactly `len` over generators `0..=rank_alpha`.
pub fn reduced_words_of_length(rank_alpha: usize, len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..=rank_alpha)
        .flat_map(|g| [Letter::pos(g), Letter::neg(g)])
        .collect();
    let mut layer = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * (letters.len() - 1));
        for w in &layer {
            for &l in &letters {
                if w.0.last().is_some_and(|&last| last.cancels(l)) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        layer = next;
    }
    layer
}

/// All freely reduced words of length `1..=max_len` over generators `0..=rank_alpha`.
pub fn reduced_words_up_to(rank_alpha: usize, max_len: usize) -> Vec<Word> {
    (1..=max_len)
        .flat_map(|len| reduced_words_of_length(rank_alpha, len))
        .collect()
}
