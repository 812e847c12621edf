//! One factor action at a finite stage: a dovetailed schedule of conditions,
//! each discharged by an embedding, plus `α`-fixed Følner intervals and the
//! checks that read everything back off the closed action.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{ActionState, ClosedAction, LogStep};
use crate::word::{Alphabet, Word, BETA};

/// Inclusive integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn points(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn to_set(&self) -> BTreeSet<i64> {
        self.points().collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerPlan {
    pub intervals: Vec<Interval>,
    pub s_plus: i64,
}

/// Positive `β`-exponent count of `c` as spelled.
pub fn s_plus(c: &Word) -> i64 {
    c.exponent_sums(BETA).positive
}

/// Requirements on the amalgamating word of a factor.
pub fn check_amalgamating_word(c: &Word) -> Result<()> {
    if c.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !c.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(c.to_string()));
    }
    if !c.contains_alpha() {
        return Err(Error::InBetaSubgroup(c.to_string()));
    }
    let sum = c.exponent_sums(BETA).total;
    if sum != 0 {
        return Err(Error::NonzeroBetaSum {
            word: c.to_string(),
            sum,
        });
    }
    Ok(())
}

/// Reserves `count` disjoint intervals with `|A_m| = m + 2·S⁺_c(β)`.
pub fn plan_folner_intervals(state: &mut ActionState, c: &Word, count: usize) -> FolnerPlan {
    let s = s_plus(c);
    let intervals = (1..=count)
        .map(|m| {
            let (lo, hi) = state.reserve_interval(m + 2 * s as usize, &BTreeSet::new());
            Interval::new(lo, hi)
        })
        .collect();
    FolnerPlan { intervals, s_plus: s }
}

/// Partial `β`-sums met while `c` acts, in application order, starting at 0.
pub fn beta_prefix_sums(c: &Word) -> Vec<i64> {
    let mut sums = vec![0];
    let mut acc = 0;
    for l in c.letters() {
        if l.is_beta() {
            acc += l.sign();
        }
        sums.push(acc);
    }
    sums
}

/// The points of an `α`-fixed interval whose whole `c`-trajectory stays in it.
///
/// Every such point is fixed by `c`: the `α`-letters act trivially and the
/// `β`-letters add up to zero.
pub fn e_set(a: &ClosedAction, c: &Word, interval: Interval) -> Result<Interval> {
    let moved = (1..=a.rank).any(|i| interval.points().any(|x| a.alpha(i).apply(x) != x));
    if moved {
        return Err(Error::NotAlphaFixed {
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    let sums = beta_prefix_sums(c);
    let (min, max) = (
        *sums.iter().min().expect("nonempty"),
        *sums.iter().max().expect("nonempty"),
    );
    Ok(Interval::new(interval.lo - min, interval.hi - max))
}

/// `E_m` for the `m`-th planned interval.
pub fn compute_e_m(plan: &FolnerPlan, c: &Word, m: usize, a: &ClosedAction) -> Result<Interval> {
    let interval = plan
        .intervals
        .get(m.wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::Invariant(format!("no planned interval A_{m}")))?;
    e_set(a, c, interval)
}

/// The lowest `m` points of `E_m`.
pub fn folner_set(plan: &FolnerPlan, c: &Word, m: usize, a: &ClosedAction) -> Result<Interval> {
    let e = compute_e_m(plan, c, m, a)?;
    if e.len() < m {
        return Err(Error::Invariant(format!("|E_{m}| = {} < {m}", e.len())));
    }
    Ok(Interval::new(e.lo, e.lo + m as i64 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// Some point moved by `c^k`.
    PowerMoves { k: i64 },
    /// Some `x` with `c·x = x`, `c·w·x = w·x`, `w·x ≠ x`.
    Witness { word: Word },
    /// An `α`-fixed interval of size `m + 2·S⁺_c(β)`.
    FixInterval { m: usize },
    /// A `⟨c⟩`-orbit of size exactly `m`; `copy` counts from 1.
    OrbitOfSize { m: usize, copy: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pending,
    Discharged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub kind: ConditionKind,
    pub status: Status,
    pub evidence: Vec<i64>,
}

impl Condition {
    pub fn pending(kind: ConditionKind) -> Self {
        Condition {
            kind,
            status: Status::Pending,
            evidence: Vec::new(),
        }
    }

    pub fn to_record(&self, alphabet: Alphabet) -> ConditionRecord {
        let (kind, label) = match &self.kind {
            ConditionKind::PowerMoves { k } => ("power_moves", format!("k={k}")),
            ConditionKind::Witness { word } => ("witness", word.display_with(alphabet).to_string()),
            ConditionKind::FixInterval { m } => ("fix_interval", format!("m={m}")),
            ConditionKind::OrbitOfSize { m, copy } => {
                ("orbit_of_size", format!("m={m},copy={copy}"))
            }
        };
        ConditionRecord {
            kind: kind.to_string(),
            label,
            status: self.status,
            evidence: self.evidence.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub kind: String,
    pub label: String,
    pub status: Status,
    pub evidence: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub powers: usize,
    pub witness_words: Vec<Word>,
    pub orbit_sizes: usize,
    pub copies: usize,
    pub intervals: usize,
}

/// Interval reservations first, then rounds `r = 1, 2, …` containing
/// `PowerMoves(r)`, the `r`-th witness word and every `OrbitOfSize(m, j)`
/// with `max(m, j) = r`.
pub fn schedule(c: &Word, budgets: &Budgets) -> Result<Vec<Condition>> {
    for w in &budgets.witness_words {
        if !w.is_reduced() {
            return Err(Error::NotReduced(w.to_string()));
        }
        if w.is_power_of(c).is_some() {
            return Err(Error::InCyclicSubgroup {
                word: w.to_string(),
                base: c.to_string(),
            });
        }
    }
    let mut out: Vec<Condition> = (1..=budgets.intervals)
        .map(|m| Condition::pending(ConditionKind::FixInterval { m }))
        .collect();
    let rounds = budgets
        .powers
        .max(budgets.witness_words.len())
        .max(budgets.orbit_sizes)
        .max(if budgets.orbit_sizes > 0 { budgets.copies } else { 0 });
    for r in 1..=rounds {
        if r <= budgets.powers {
            out.push(Condition::pending(ConditionKind::PowerMoves { k: r as i64 }));
        }
        if let Some(w) = budgets.witness_words.get(r - 1) {
            out.push(Condition::pending(ConditionKind::Witness { word: w.clone() }));
        }
        for m in 1..=budgets.orbit_sizes {
            for copy in 1..=budgets.copies {
                if m.max(copy) == r {
                    out.push(Condition::pending(ConditionKind::OrbitOfSize { m, copy }));
                }
            }
        }
    }
    Ok(out)
}

/// A factor action built from a schedule.
#[derive(Clone, Debug)]
pub struct GenericAction {
    pub c: Word,
    pub state: ActionState,
    pub closed: ClosedAction,
    pub plan: FolnerPlan,
    pub conditions: Vec<Condition>,
}

impl GenericAction {
    pub fn rank(&self) -> usize {
        self.state.rank()
    }

    /// Every allocated point, widened by `margin` on both sides.
    pub fn window(&self, margin: i64) -> Interval {
        Interval::new(self.state.origin() - margin, self.state.next_free() + margin)
    }

    /// Wraps a bare state; the plan is read from its reserved intervals and no
    /// condition evidence is attached.
    pub fn from_state(c: &Word, state: ActionState) -> Self {
        let intervals = state
            .log()
            .iter()
            .filter_map(|step| match *step {
                LogStep::Interval { lo, hi } => Some(Interval::new(lo, hi)),
                _ => None,
            })
            .collect();
        GenericAction {
            c: c.clone(),
            closed: state.close(),
            state,
            plan: FolnerPlan {
                intervals,
                s_plus: s_plus(c),
            },
            conditions: Vec::new(),
        }
    }

    /// Recomputes the closure after the state was changed directly.
    pub fn refresh(&mut self) {
        self.closed = self.state.close();
    }

    pub fn report(&self, margin: i64, alphabet: Alphabet) -> GenericReport {
        GenericReport::compute(self, margin, alphabet)
    }
}

/// Discharges every condition in order, allocating upwards from `origin`.
pub fn build_generic_action(
    c: &Word,
    rank: usize,
    schedule: &[Condition],
    origin: i64,
) -> Result<GenericAction> {
    check_amalgamating_word(c)?;
    if let Some(g) = c.max_gen().filter(|&g| g > rank) {
        return Err(Error::GeneratorOutOfRange { gen: g, rank });
    }
    let mut state = ActionState::new(rank, origin);
    let mut plan = FolnerPlan {
        intervals: Vec::new(),
        s_plus: s_plus(c),
    };
    let none = BTreeSet::new();
    let mut conditions = schedule.to_vec();
    for cond in &mut conditions {
        cond.evidence = match &cond.kind {
            ConditionKind::PowerMoves { k } => {
                let (x, y) = state.embed_path(&c.pow(*k), &none)?;
                vec![x, y]
            }
            ConditionKind::Witness { word } => vec![state.embed_q_witness(c, word, &none)?],
            ConditionKind::FixInterval { m } => {
                let size = m + 2 * plan.s_plus as usize;
                let (lo, hi) = state.reserve_interval(size, &none);
                plan.intervals.push(Interval::new(lo, hi));
                vec![lo, hi]
            }
            ConditionKind::OrbitOfSize { m, .. } => {
                vec![state.embed_cycle(&c.pow(*m as i64), &none)?]
            }
        };
        cond.status = Status::Discharged;
    }
    let closed = state.close();
    Ok(GenericAction {
        c: c.clone(),
        state,
        closed,
        plan,
        conditions,
    })
}

/// The `⟨c⟩`-orbit of `x`, or `None` if it does not close within `limit` steps.
pub fn c_orbit(a: &ClosedAction, c: &Word, x: i64, limit: usize) -> Option<Vec<i64>> {
    let mut orbit = vec![x];
    let mut y = a.evaluate(c, x);
    while y != x {
        if orbit.len() >= limit {
            return None;
        }
        orbit.push(y);
        y = a.evaluate(c, y);
    }
    Some(orbit)
}

/// Counts `⟨c⟩`-orbits lying entirely inside `window`, by size.
pub fn orbit_census(a: &ClosedAction, c: &Word, window: Interval) -> BTreeMap<usize, usize> {
    let mut seen = BTreeSet::new();
    let mut census = BTreeMap::new();
    for x in window.points() {
        if seen.contains(&x) {
            continue;
        }
        if let Some(orbit) = c_orbit(a, c, x, window.len()) {
            let inside = orbit.iter().all(|&y| window.contains(y));
            seen.extend(orbit.iter().copied());
            if inside {
                *census.entry(orbit.len()).or_insert(0) += 1;
            }
        }
    }
    census
}

/// Whether every `⟨c⟩`-orbit through the window is finite.
pub fn orbits_finite(a: &ClosedAction, c: &Word, window: Interval) -> bool {
    let limit = window.len() + a.support_bounds().map_or(0, |(lo, hi)| (hi - lo + 1) as usize);
    window.points().all(|x| c_orbit(a, c, x, limit.max(1)).is_some())
}

/// `|s △ w·s| / |s|`.
pub fn folner_ratio(a: &ClosedAction, s: &BTreeSet<i64>, w: &Word) -> Result<Ratio<i64>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let escaped = s.iter().filter(|&&x| !s.contains(&a.evaluate(w, x))).count();
    Ok(Ratio::new(2 * escaped as i64, s.len() as i64))
}

/// Whether the window lies in one orbit of `⟨gens⟩`, searching through points
/// at most `margin` outside the window.
pub fn verify_subgroup_transitive(
    a: &ClosedAction,
    gens: &[Word],
    window: Interval,
    margin: i64,
) -> bool {
    if window.is_empty() {
        return true;
    }
    let bound = Interval::new(window.lo - margin, window.hi + margin);
    let moves: Vec<Word> = gens
        .iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .collect();
    let mut seen = BTreeSet::from([window.lo]);
    let mut queue = VecDeque::from([window.lo]);
    while let Some(x) = queue.pop_front() {
        for g in &moves {
            let y = a.evaluate(g, x);
            if bound.contains(y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    window.points().all(|x| seen.contains(&x))
}

/// Nontrivial reduced words of length at most `max_len`, not powers of `c`,
/// that fix every point of the window.
pub fn unmoved_words(
    a: &ClosedAction,
    c: &Word,
    words: &[Word],
    window: Interval,
) -> Vec<Word> {
    words
        .iter()
        .filter(|w| w.is_power_of(c).is_none())
        .filter(|w| window.points().all(|x| a.evaluate(w, x) == x))
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub word: String,
    pub x: i64,
    pub wx: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerEntry {
    pub set_id: String,
    pub word: String,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub transitive: bool,
    pub powers_move: bool,
    pub witnesses_hold: bool,
    pub census_bounds: bool,
    pub orbits_finite: bool,
    pub folner_sets_fixed: bool,
}

impl ReportFlags {
    pub fn all(&self) -> bool {
        self.transitive
            && self.powers_move
            && self.witnesses_hold
            && self.census_bounds
            && self.orbits_finite
            && self.folner_sets_fixed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericReport {
    pub census: BTreeMap<usize, usize>,
    pub witnesses: Vec<WitnessEntry>,
    pub folner: Vec<FolnerEntry>,
    pub conditions: Vec<ConditionRecord>,
    pub flags: ReportFlags,
}

impl GenericReport {
    /// Reads every check off the closed action and the condition evidence.
    pub fn compute(g: &GenericAction, margin: i64, alphabet: Alphabet) -> Self {
        let a = &g.closed;
        let c = &g.c;
        let window = g.window(margin);
        let census = orbit_census(a, c, window);

        let mut flags = ReportFlags {
            transitive: verify_subgroup_transitive(a, &[Word::letter(BETA)], window, 0),
            powers_move: true,
            witnesses_hold: true,
            census_bounds: true,
            orbits_finite: orbits_finite(a, c, window),
            folner_sets_fixed: true,
        };
        let mut witnesses = Vec::new();
        let mut wanted: BTreeMap<usize, usize> = BTreeMap::new();
        for cond in &g.conditions {
            match &cond.kind {
                ConditionKind::PowerMoves { k } => {
                    let x = cond.evidence[0];
                    flags.powers_move &= a.evaluate(&c.pow(*k), x) != x;
                }
                ConditionKind::Witness { word } => {
                    let x = cond.evidence[0];
                    let wx = a.evaluate(word, x);
                    flags.witnesses_hold &=
                        a.evaluate(c, x) == x && a.evaluate(c, wx) == wx && wx != x;
                    witnesses.push(WitnessEntry {
                        word: word.display_with(alphabet).to_string(),
                        x,
                        wx,
                    });
                }
                ConditionKind::OrbitOfSize { m, .. } => {
                    *wanted.entry(*m).or_insert(0) += 1;
                }
                ConditionKind::FixInterval { .. } => {}
            }
        }
        for (m, count) in wanted {
            flags.census_bounds &= census.get(&m).copied().unwrap_or(0) >= count;
        }

        let mut folner = Vec::new();
        let mut gens: Vec<Word> = (0..=g.rank()).map(Word::letter).collect();
        gens.push(c.clone());
        for m in 1..=g.plan.intervals.len() {
            match folner_set(&g.plan, c, m, a) {
                Ok(set) => {
                    let s = set.to_set();
                    for w in &gens {
                        let r = folner_ratio(a, &s, w).expect("nonempty set");
                        folner.push(FolnerEntry {
                            set_id: format!("E'_{m}"),
                            word: w.display_with(alphabet).to_string(),
                            num: *r.numer(),
                            den: *r.denom(),
                        });
                    }
                    flags.folner_sets_fixed &= s.iter().all(|&x| a.evaluate(c, x) == x);
                }
                Err(_) => flags.folner_sets_fixed = false,
            }
        }

        GenericReport {
            census,
            witnesses,
            folner,
            conditions: g.conditions.iter().map(|c| c.to_record(alphabet)).collect(),
            flags,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn commutator() -> Word {
        w("a1 b a1^-1 b^-1")
    }

    #[test]
    fn interval_sizes() {
        let mut s = ActionState::new(2, 0);
        let c = w("a1 b^-1 a2 b^-1 a2^2 b^2");
        let plan = plan_folner_intervals(&mut s, &c, 3);
        assert_eq!(plan.s_plus, 2);
        assert_eq!(plan.intervals[2].len(), 7);
        let mut s = ActionState::new(2, 0);
        let plan = plan_folner_intervals(&mut s, &w("a1 a2^-1"), 4);
        assert_eq!(plan.intervals[3].len(), 4);
    }

    #[test]
    fn planned_intervals_disjoint() {
        let mut s = ActionState::new(1, 0);
        let plan = plan_folner_intervals(&mut s, &commutator(), 100);
        for pair in plan.intervals.windows(2) {
            assert!(pair[0].hi < pair[1].lo);
        }
    }

    #[test]
    fn e_set_example() {
        // written a1 b^-1 a1 b: the trajectory visits x and x + 1
        let c = w("a1 b^-1 a1 b");
        let a = ClosedAction::identity(1);
        for m in [1, 4, 9] {
            let e = e_set(&a, &c, Interval::new(0, m + 1)).unwrap();
            assert_eq!(e, Interval::new(0, m));
            assert!(e.points().all(|x| a.evaluate(&c, x) == x));
        }
    }

    #[test]
    fn e_set_requires_alpha_fixed() {
        let mut s = ActionState::new(1, 0);
        s.embed_cycle(&commutator(), &BTreeSet::new()).unwrap();
        let a = s.close();
        let (lo, hi) = a.support_bounds().unwrap();
        assert!(matches!(
            e_set(&a, &commutator(), Interval::new(lo, hi)),
            Err(Error::NotAlphaFixed { .. })
        ));
    }

    #[test]
    fn schedule_counts() {
        let c = commutator();
        assert!(schedule(&c, &Budgets::default()).unwrap().is_empty());
        let b = Budgets {
            powers: 3,
            witness_words: vec![w("a1"), w("b")],
            orbit_sizes: 2,
            copies: 3,
            intervals: 4,
        };
        let s = schedule(&c, &b).unwrap();
        assert_eq!(s.len(), 3 + 2 + 2 * 3 + 4);
        assert!(s[..4]
            .iter()
            .all(|c| matches!(c.kind, ConditionKind::FixInterval { .. })));
        let bad = Budgets {
            witness_words: vec![c.pow(2)],
            ..Budgets::default()
        };
        assert!(schedule(&c, &bad).is_err());
    }

    #[test]
    fn small_build_report() {
        let c = commutator();
        let b = Budgets {
            powers: 2,
            witness_words: vec![w("a1"), w("b"), w("a1 b")],
            orbit_sizes: 3,
            copies: 2,
            intervals: 5,
        };
        let g = build_generic_action(&c, 1, &schedule(&c, &b).unwrap(), 0).unwrap();
        let r = g.report(5, Alphabet::First);
        assert!(r.flags.all(), "{:?}", r.flags);
        for m in 1..=3 {
            assert!(r.census[&m] >= 2);
        }
        g.state.audit().unwrap();
    }

    #[test]
    fn census_of_identity() {
        let a = ClosedAction::identity(1);
        let census = orbit_census(&a, &commutator(), Interval::new(0, 9));
        assert_eq!(census, BTreeMap::from([(1, 10)]));
    }

    #[test]
    fn ratios() {
        let a = ClosedAction::identity(2);
        for k in [10, 20, 50, 100] {
            let s = Interval::new(3, 2 + k).to_set();
            assert_eq!(folner_ratio(&a, &s, &w("b")).unwrap(), Ratio::new(2, k));
            assert_eq!(folner_ratio(&a, &s, &w("a2")).unwrap(), Ratio::from_integer(0));
        }
        assert!(folner_ratio(&a, &BTreeSet::new(), &w("b")).is_err());
    }

    #[test]
    fn transitivity_checks() {
        let a = ClosedAction::identity(1);
        let win = Interval::new(0, 20);
        assert!(verify_subgroup_transitive(&a, &[w("b")], win, 0));
        assert!(!verify_subgroup_transitive(&a, &[w("b^2")], win, 5));
    }

    #[test]
    fn rejects_bad_c() {
        assert!(build_generic_action(&w("b"), 1, &[], 0).is_err());
        assert!(build_generic_action(&w("a1 b"), 1, &[], 0).is_err());
        assert!(build_generic_action(&w("b a1 b^-1"), 1, &[], 0).is_err());
    }
}
