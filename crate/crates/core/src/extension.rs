//! Partial `α`-assignments over the shift graph of `Z` and their closure.
//!
//! `β` is always the translation `x ↦ x + 1`; an [`ActionState`] only records
//! `α`-edges. Embedding a labeled graph cuts it into its maximal `β`-paths,
//! places each path on a fresh integer block and then adds the `α`-edges
//! between the blocks. Closing turns every open `α_i`-chain into a cycle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, LabeledGraph, VertexId, MARK_START};
use crate::word::{Gen, Word, BETA};

/// Free points left between consecutive allocations.
pub const GAP: i64 = 1;

/// A finite partial injection of `Z`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialInjection {
    fwd: BTreeMap<i64, i64>,
    bwd: BTreeMap<i64, i64>,
}

impl PartialInjection {
    pub fn get(&self, x: i64) -> Option<i64> {
        self.fwd.get(&x).copied()
    }

    pub fn get_inv(&self, y: i64) -> Option<i64> {
        self.bwd.get(&y).copied()
    }

    /// Inserts `x ↦ y`. Re-inserting an existing pair is a no-op.
    pub fn insert(&mut self, x: i64, y: i64) -> std::result::Result<(), i64> {
        match (self.fwd.get(&x), self.bwd.get(&y)) {
            (Some(&old), _) if old == y => Ok(()),
            (Some(_), _) => Err(x),
            (_, Some(_)) => Err(y),
            _ => {
                self.fwd.insert(x, y);
                self.bwd.insert(y, x);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.fwd.iter().map(|(&x, &y)| (x, y))
    }

    /// Closes every maximal open chain `x_0 → ⋯ → x_k` with the edge `x_k → x_0`.
    pub fn close(&self) -> FinitePerm {
        let mut fwd = self.fwd.clone();
        for (&start, _) in self.fwd.iter().filter(|(x, _)| !self.bwd.contains_key(x)) {
            let mut end = start;
            while let Some(&next) = self.fwd.get(&end) {
                end = next;
            }
            fwd.insert(end, start);
        }
        FinitePerm::from_map(fwd)
    }
}

/// A permutation of `Z` moving finitely many points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinitePerm {
    fwd: BTreeMap<i64, i64>,
    bwd: BTreeMap<i64, i64>,
}

impl FinitePerm {
    /// Builds from a bijective map on its key set; fixed entries are dropped.
    pub fn from_map(map: BTreeMap<i64, i64>) -> Self {
        let fwd: BTreeMap<i64, i64> = map.into_iter().filter(|(x, y)| x != y).collect();
        let bwd = fwd.iter().map(|(&x, &y)| (y, x)).collect();
        FinitePerm { fwd, bwd }
    }

    pub fn from_cycles(cycles: &[Vec<i64>]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if map.insert(x, y).is_some() {
                    return Err(Error::Invariant(format!("point {x} occurs in two cycles")));
                }
            }
        }
        Ok(FinitePerm::from_map(map))
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.fwd.get(&x).copied().unwrap_or(x)
    }

    pub fn apply_inv(&self, x: i64) -> i64 {
        self.bwd.get(&x).copied().unwrap_or(x)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.fwd.keys().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.fwd.is_empty()
    }

    /// Nontrivial cycles, each starting at its smallest point, sorted.
    pub fn cycles(&self) -> Vec<Vec<i64>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &x in self.fwd.keys() {
            if !seen.insert(x) {
                continue;
            }
            let mut cycle = vec![x];
            let mut y = self.apply(x);
            while y != x {
                seen.insert(y);
                cycle.push(y);
                y = self.apply(y);
            }
            out.push(cycle);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum LogStep {
    /// `α_gen` maps `src` to `dst`.
    Edge { gen: Gen, src: i64, dst: i64 },
    /// A block of fresh points taken for an embedded `β`-path.
    Block { lo: i64, hi: i64 },
    /// An interval reserved to stay `α`-fixed.
    Interval { lo: i64, hi: i64 },
}

/// The `α`-assignments built so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionState {
    rank: usize,
    alphas: Vec<PartialInjection>,
    reserved: BTreeSet<i64>,
    origin: i64,
    next_free: i64,
    log: Vec<LogStep>,
}

impl ActionState {
    /// An empty state for `rank` generators `α_1..α_rank`, allocating upwards
    /// from `origin`.
    pub fn new(rank: usize, origin: i64) -> Self {
        ActionState {
            rank,
            alphas: vec![PartialInjection::default(); rank],
            reserved: BTreeSet::new(),
            origin,
            next_free: origin,
            log: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// First integer above every allocation so far.
    pub fn next_free(&self) -> i64 {
        self.next_free
    }

    pub fn alpha(&self, i: Gen) -> &PartialInjection {
        &self.alphas[i - 1]
    }

    pub fn reserved(&self) -> &BTreeSet<i64> {
        &self.reserved
    }

    pub fn log(&self) -> &[LogStep] {
        &self.log
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_gen() {
            Some(g) if g > self.rank => Err(Error::GeneratorOutOfRange {
                gen: g,
                rank: self.rank,
            }),
            _ => Ok(()),
        }
    }

    /// Lowest start for `points` fresh consecutive integers.
    fn allocate(&mut self, points: i64, forbidden: &BTreeSet<i64>) -> i64 {
        let floor = forbidden
            .iter()
            .next_back()
            .map_or(self.next_free, |&f| self.next_free.max(f + 1));
        let lo = floor + GAP;
        self.next_free = lo + points;
        lo
    }

    fn add_edge(&mut self, gen: Gen, src: i64, dst: i64) -> Result<()> {
        self.alphas[gen - 1]
            .insert(src, dst)
            .map_err(|point| Error::EdgeConflict { gen, point })?;
        self.reserved.insert(src);
        self.reserved.insert(dst);
        self.log.push(LogStep::Edge { gen, src, dst });
        Ok(())
    }

    /// Reserves `size` consecutive fresh points; nothing will ever assign an
    /// `α`-edge there.
    pub fn reserve_interval(&mut self, size: usize, forbidden: &BTreeSet<i64>) -> (i64, i64) {
        let lo = self.allocate(size as i64, forbidden);
        let hi = lo + size as i64 - 1;
        self.reserved.extend(lo..=hi);
        self.log.push(LogStep::Interval { lo, hi });
        (lo, hi)
    }

    /// Embeds a well-labeled graph whose `β`-edges form paths, on fresh points
    /// above `forbidden` and everything reserved. Returns the vertex map.
    pub fn embed_graph(
        &mut self,
        g: &LabeledGraph,
        forbidden: &BTreeSet<i64>,
    ) -> Result<BTreeMap<VertexId, i64>> {
        if let Some(vertex) = g.well_labeled_violation() {
            return Err(Error::NotWellLabeled { vertex });
        }
        if let Some(e) = g.edges().find(|e| e.label > self.rank) {
            return Err(Error::GeneratorOutOfRange {
                gen: e.label,
                rank: self.rank,
            });
        }
        let mut beta_out = BTreeMap::new();
        let mut beta_in = BTreeMap::new();
        for e in g.edges().filter(|e| e.label == BETA) {
            beta_out.insert(e.src, e.dst);
            beta_in.insert(e.dst, e.src);
        }
        let mut placed: BTreeMap<VertexId, i64> = BTreeMap::new();
        for &v in g.vertices() {
            if placed.contains_key(&v) {
                continue;
            }
            // walk back to the start of the β-path through v
            let mut start = v;
            while let Some(&prev) = beta_in.get(&start) {
                start = prev;
                if start == v {
                    return Err(Error::BetaCycle { vertex: v });
                }
            }
            let mut run = vec![start];
            while let Some(&next) = beta_out.get(run.last().unwrap()) {
                run.push(next);
            }
            let lo = self.allocate(run.len() as i64, forbidden);
            let hi = lo + run.len() as i64 - 1;
            for (k, &u) in run.iter().enumerate() {
                placed.insert(u, lo + k as i64);
            }
            self.reserved.extend(lo..=hi);
            self.log.push(LogStep::Block { lo, hi });
        }
        for e in g.edges().filter(|e| e.label != BETA) {
            self.add_edge(e.label, placed[&e.src], placed[&e.dst])?;
        }
        Ok(placed)
    }

    /// Embeds `P(w)`; after closing, `w` maps `start` to `end`.
    pub fn embed_path(&mut self, w: &Word, forbidden: &BTreeSet<i64>) -> Result<(i64, i64)> {
        self.check_word(w)?;
        let p = graph::path_graph(w, 0)?;
        let map = self.embed_graph(&p, forbidden)?;
        Ok((map[&0], map[&(w.len() as VertexId)]))
    }

    /// Embeds `C(w)`; after closing, `w` fixes the returned base point.
    pub fn embed_cycle(&mut self, w: &Word, forbidden: &BTreeSet<i64>) -> Result<i64> {
        self.check_word(w)?;
        if w.in_beta_subgroup() {
            return Err(Error::InBetaSubgroup(w.to_string()));
        }
        let cyc = graph::cycle_graph(w, 0)?;
        let map = self.embed_graph(&cyc, forbidden)?;
        Ok(map[&0])
    }

    /// Embeds `fold(Q₀(c, w))`; after closing, the returned `x` satisfies
    /// `c·x = x`, `c·(w·x) = w·x` and `w·x ≠ x`.
    pub fn embed_q_witness(
        &mut self,
        c: &Word,
        w: &Word,
        forbidden: &BTreeSet<i64>,
    ) -> Result<i64> {
        self.check_word(c)?;
        self.check_word(w)?;
        let (q, shape) = graph::build_q(c, &w.free_reduce())?;
        if shape.collision {
            return Err(Error::WitnessCollision);
        }
        let map = self.embed_graph(&q, forbidden)?;
        Ok(map[&q.mark(MARK_START).expect("Q carries v0")])
    }

    pub fn close(&self) -> ClosedAction {
        ClosedAction {
            rank: self.rank,
            alphas: self.alphas.iter().map(PartialInjection::close).collect(),
        }
    }

    /// Replays the log and checks that it reproduces the state with every
    /// allocation above the previous ones and no edge ever rewritten.
    pub fn audit(&self) -> Result<()> {
        let replay = ActionState::replay(self.rank, self.origin, &self.log)?;
        if replay.alphas != self.alphas || replay.reserved != self.reserved {
            return Err(Error::Invariant("log does not reproduce the state".into()));
        }
        for (i, alpha) in self.alphas.iter().enumerate() {
            if alpha.fwd.len() != alpha.bwd.len() {
                return Err(Error::Invariant(format!("alpha_{} is not injective", i + 1)));
            }
        }
        Ok(())
    }

    /// Rebuilds a state from its log.
    pub fn replay(rank: usize, origin: i64, log: &[LogStep]) -> Result<Self> {
        let mut s = ActionState::new(rank, origin);
        for step in log {
            match *step {
                LogStep::Edge { gen, src, dst } => {
                    if gen == BETA || gen > rank {
                        return Err(Error::GeneratorOutOfRange { gen, rank });
                    }
                    if !s.reserved.contains(&src) || !s.reserved.contains(&dst) {
                        return Err(Error::Invariant(format!(
                            "edge {src} -> {dst} outside every allocated block"
                        )));
                    }
                    s.add_edge(gen, src, dst)?;
                }
                LogStep::Block { lo, hi } | LogStep::Interval { lo, hi } => {
                    if lo < s.next_free || hi < lo - 1 {
                        return Err(Error::Invariant(format!(
                            "allocation [{lo}, {hi}] below the high-water mark {}",
                            s.next_free
                        )));
                    }
                    s.reserved.extend(lo..=hi);
                    s.next_free = hi + 1;
                    s.log.push(*step);
                }
            }
        }
        Ok(s)
    }

    /// Translates every point by `offset` and renames `α_i` to `α_{rename[i-1]}`.
    pub fn transported(&self, offset: i64, rank: usize, rename: &[Gen]) -> Result<Self> {
        let map_gen = |g: Gen| -> Result<Gen> {
            match rename.get(g - 1) {
                Some(&h) if h >= 1 && h <= rank => Ok(h),
                _ => Err(Error::GeneratorOutOfRange { gen: g, rank }),
            }
        };
        let log = self
            .log
            .iter()
            .map(|step| {
                Ok(match *step {
                    LogStep::Edge { gen, src, dst } => LogStep::Edge {
                        gen: map_gen(gen)?,
                        src: src + offset,
                        dst: dst + offset,
                    },
                    LogStep::Block { lo, hi } => LogStep::Block {
                        lo: lo + offset,
                        hi: hi + offset,
                    },
                    LogStep::Interval { lo, hi } => LogStep::Interval {
                        lo: lo + offset,
                        hi: hi + offset,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = ActionState::replay(rank, self.origin + offset, &log)?;
        s.next_free = s.next_free.max(self.next_free + offset);
        Ok(s)
    }
}

/// Finitely supported permutations `α_1..α_rank`; `β` is the shift.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosedAction {
    pub rank: usize,
    pub alphas: Vec<FinitePerm>,
}

impl ClosedAction {
    pub fn identity(rank: usize) -> Self {
        ClosedAction {
            rank,
            alphas: vec![FinitePerm::default(); rank],
        }
    }

    pub fn alpha(&self, i: Gen) -> &FinitePerm {
        &self.alphas[i - 1]
    }

    /// `w·x`, applying `letters()[0]` first.
    pub fn evaluate(&self, w: &Word, x: i64) -> i64 {
        w.letters().iter().fold(x, |y, l| match (l.gen, l.inverse) {
            (BETA, false) => y + 1,
            (BETA, true) => y - 1,
            (g, false) => self.alphas[g - 1].apply(y),
            (g, true) => self.alphas[g - 1].apply_inv(y),
        })
    }

    /// Smallest and largest point moved by some `α_i`.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let points = self.alphas.iter().flat_map(FinitePerm::support);
        points.fold(None, |acc, x| match acc {
            None => Some((x, x)),
            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
        })
    }

    /// Points moved by `w` within `lo..=hi`.
    pub fn moved_points(&self, w: &Word, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&x| self.evaluate(w, x) != x).collect()
    }
}

/// `β`-shift window with the closed `α`-edges, as a labeled graph.
pub fn window_graph(a: &ClosedAction, lo: i64, hi: i64, with_beta: bool) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for x in lo..=hi {
        g.add_vertex(x);
        if with_beta && x < hi {
            g.add_edge(x, x + 1, BETA);
        }
    }
    for (i, perm) in a.alphas.iter().enumerate() {
        for x in perm.support().filter(|x| (lo..=hi).contains(x)) {
            let y = perm.apply(x);
            if (lo..=hi).contains(&y) {
                g.add_edge(x, y, i + 1);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn none() -> BTreeSet<i64> {
        BTreeSet::new()
    }

    #[test]
    fn beta_path_needs_no_alpha() {
        let mut s = ActionState::new(2, 0);
        let (start, end) = s.embed_path(&w("b^3"), &none()).unwrap();
        assert_eq!(end, start + 3);
        assert!(s.alpha(1).is_empty() && s.alpha(2).is_empty());
    }

    #[test]
    fn single_alpha_edge_avoids_forbidden() {
        let mut s = ActionState::new(1, 0);
        let forbidden: BTreeSet<i64> = (0..20).collect();
        let (x, y) = s.embed_path(&w("a1"), &forbidden).unwrap();
        assert!(!forbidden.contains(&x) && !forbidden.contains(&y));
        assert_eq!(s.alpha(1).get(x), Some(y));
        assert_eq!(s.close().evaluate(&w("a1"), x), y);
    }

    #[test]
    fn cycle_of_power_has_exact_orbit() {
        let c = w("a1 b a1^-1 b^-1");
        let mut s = ActionState::new(1, 0);
        let base = s.embed_cycle(&c.pow(3), &none()).unwrap();
        let a = s.close();
        let orbit: BTreeSet<i64> = (0..3)
            .map(|k| a.evaluate(&c.pow(k), base))
            .collect();
        assert_eq!(orbit.len(), 3);
        assert_eq!(a.evaluate(&c.pow(3), base), base);
    }

    #[test]
    fn beta_cycle_rejected() {
        let mut s = ActionState::new(1, 0);
        assert!(matches!(
            s.embed_cycle(&w("b^2"), &none()),
            Err(Error::InBetaSubgroup(_))
        ));
    }

    #[test]
    fn q_witness_conditions() {
        let c = w("a1 b a1^-1 b^-1");
        let mut s = ActionState::new(2, 0);
        let mut seen = BTreeSet::new();
        for word in ["a2", "a1", "b", "a2 b^-1 a1"] {
            let g = w(word);
            let x = s.embed_q_witness(&c, &g, &seen).unwrap();
            let a = s.close();
            let gx = a.evaluate(&g, x);
            assert_eq!(a.evaluate(&c, x), x);
            assert_eq!(a.evaluate(&c, gx), gx);
            assert_ne!(gx, x);
            assert!(seen.insert(x));
        }
        s.audit().unwrap();
    }

    #[test]
    fn closing_chain() {
        let mut p = PartialInjection::default();
        p.insert(0, 1).unwrap();
        p.insert(1, 2).unwrap();
        let perm = p.close();
        assert_eq!(perm.cycles(), vec![vec![0, 1, 2]]);
        let mut closed = PartialInjection::default();
        for (x, y) in [(0, 1), (1, 2), (2, 0)] {
            closed.insert(x, y).unwrap();
        }
        assert_eq!(closed.close(), perm);
    }

    #[test]
    fn empty_state_closes_to_identity() {
        let a = ActionState::new(3, 0).close();
        assert!(a.alphas.iter().all(FinitePerm::is_identity));
        assert_eq!(a.evaluate(&w("b^3"), 5), 8);
        assert_eq!(a.evaluate(&Word::identity(), 5), 5);
    }

    #[test]
    fn conflicting_edge_rejected() {
        let mut p = PartialInjection::default();
        p.insert(0, 1).unwrap();
        assert_eq!(p.insert(0, 2), Err(0));
        assert_eq!(p.insert(5, 1), Err(1));
        assert_eq!(p.insert(0, 1), Ok(()));
    }

    #[test]
    fn interval_stays_fixed() {
        let c = w("a1 b a1^-1 b^-1");
        let mut s = ActionState::new(1, 0);
        let (lo, hi) = s.reserve_interval(10, &none());
        s.embed_cycle(&c.pow(2), &none()).unwrap();
        let a = s.close();
        assert!((lo..=hi).all(|x| a.evaluate(&w("a1"), x) == x));
        assert!(a.support_bounds().unwrap().0 > hi);
    }

    #[test]
    fn transport_renames_and_shifts() {
        let mut s = ActionState::new(2, 0);
        s.embed_path(&w("a1 b a2"), &none()).unwrap();
        let t = s.transported(1000, 2, &[2, 1]).unwrap();
        let (a, b) = (s.close(), t.close());
        for x in 0..20 {
            assert_eq!(a.evaluate(&w("a1"), x) + 1000, b.evaluate(&w("a2"), x + 1000));
        }
        t.audit().unwrap();
    }
}
