//! Finite labeled graphs over `{α_i, β}`: paths and cycles of words, folding,
//! the graph `Q(c, w)` and embeddings.
//!
//! Only the positively labeled orientation of each edge is stored; an edge
//! `(src, dst, g)` is read backwards by the letter `g⁻¹`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Gen, Letter, Word, BETA};

pub type VertexId = i64;

pub const MARK_START: &str = "v0";
pub const MARK_END: &str = "wv0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub label: Gen,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
    marks: BTreeMap<String, VertexId>,
}

/// Out/in neighbour lookup per `(vertex, label)`.
#[derive(Debug, Default)]
pub struct Adjacency {
    out: BTreeMap<(VertexId, Gen), VertexId>,
    inc: BTreeMap<(VertexId, Gen), VertexId>,
}

impl Adjacency {
    /// Endpoint of the edge leaving `v` along `letter`, if any.
    pub fn step(&self, v: VertexId, letter: Letter) -> Option<VertexId> {
        if letter.inverse {
            self.inc.get(&(v, letter.gen)).copied()
        } else {
            self.out.get(&(v, letter.gen)).copied()
        }
    }
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, src: VertexId, dst: VertexId, label: Gen) {
        self.vertices.insert(src);
        self.vertices.insert(dst);
        self.edges.insert(Edge { src, dst, label });
    }

    /// Adds the edge read as `letter` from `from` to `to`.
    pub fn add_letter_edge(&mut self, from: VertexId, letter: Letter, to: VertexId) {
        if letter.inverse {
            self.add_edge(to, from, letter.gen);
        } else {
            self.add_edge(from, to, letter.gen);
        }
    }

    pub fn set_mark(&mut self, name: &str, v: VertexId) {
        self.marks.insert(name.to_string(), v);
    }

    pub fn mark(&self, name: &str) -> Option<VertexId> {
        self.marks.get(name).copied()
    }

    pub fn marks(&self) -> &BTreeMap<String, VertexId> {
        &self.marks
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::default();
        for e in &self.edges {
            adj.out.insert((e.src, e.label), e.dst);
            adj.inc.insert((e.dst, e.label), e.src);
        }
        adj
    }

    /// First vertex violating well-labeledness, if any.
    pub fn well_labeled_violation(&self) -> Option<VertexId> {
        let mut out = BTreeSet::new();
        let mut inc = BTreeSet::new();
        for e in &self.edges {
            if !out.insert((e.src, e.label)) {
                return Some(e.src);
            }
            if !inc.insert((e.dst, e.label)) {
                return Some(e.dst);
            }
        }
        None
    }

    pub fn is_well_labeled(&self) -> bool {
        self.well_labeled_violation().is_none()
    }

    /// Follows `w` from `v`, returning the endpoint if every step exists.
    pub fn read(&self, v: VertexId, w: &Word) -> Option<VertexId> {
        let adj = self.adjacency();
        w.letters().iter().try_fold(v, |x, &l| adj.step(x, l))
    }

    pub fn to_dot(&self, alphabet: Alphabet) -> String {
        let mut s = String::from("digraph G {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  {v};");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{}\"];",
                e.src,
                e.dst,
                alphabet.letter_name(e.label)
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, alphabet: Alphabet) -> GraphJson {
        GraphJson {
            vertices: self.vertices.iter().copied().collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    src: e.src,
                    dst: e.dst,
                    label: alphabet.letter_name(e.label),
                })
                .collect(),
            marks: self.marks.clone(),
        }
    }

    pub fn from_json(json: &GraphJson, alphabet: Alphabet) -> Result<Self> {
        let mut g = LabeledGraph::new();
        for &v in &json.vertices {
            g.add_vertex(v);
        }
        for e in &json.edges {
            let w = Word::parse_with(&e.label, alphabet)?;
            match w.letters() {
                [l] if !l.inverse => g.add_edge(e.src, e.dst, l.gen),
                _ => {
                    return Err(Error::Parse {
                        input: e.label.clone(),
                        reason: "edge label must be a single positive letter".into(),
                    })
                }
            }
        }
        for (k, &v) in &json.marks {
            g.set_mark(k, v);
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: VertexId,
    pub dst: VertexId,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeJson>,
    pub marks: BTreeMap<String, VertexId>,
}

/// `P(w, start)`: `|w| + 1` vertices `start, start+1, …`, edge `j` labeled `w_j`.
pub fn path_graph(w: &Word, start: VertexId) -> Result<LabeledGraph> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_reduced() {
        return Err(Error::NotReduced(w.to_string()));
    }
    let mut g = LabeledGraph::new();
    g.add_vertex(start);
    for (j, &l) in w.letters().iter().enumerate() {
        let j = j as VertexId;
        g.add_letter_edge(start + j, l, start + j + 1);
    }
    g.set_mark(MARK_START, start);
    g.set_mark(MARK_END, start + w.len() as VertexId);
    Ok(g)
}

/// `C(w, start)`: `|w|` vertices, closed at `start`.
pub fn cycle_graph(w: &Word, start: VertexId) -> Result<LabeledGraph> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(w.to_string()));
    }
    let m = w.len() as VertexId;
    let mut g = LabeledGraph::new();
    for (j, &l) in w.letters().iter().enumerate() {
        let j = j as VertexId;
        g.add_letter_edge(start + j, l, start + (j + 1) % m);
    }
    g.set_mark(MARK_START, start);
    Ok(g)
}

struct UnionFind {
    parent: BTreeMap<VertexId, VertexId>,
}

impl UnionFind {
    fn new(vertices: impl Iterator<Item = VertexId>) -> Self {
        UnionFind {
            parent: vertices.map(|v| (v, v)).collect(),
        }
    }

    fn find(&mut self, v: VertexId) -> VertexId {
        let mut root = v;
        while self.parent[&root] != root {
            root = self.parent[&root];
        }
        let mut x = v;
        while x != root {
            let next = self.parent[&x];
            self.parent.insert(x, root);
            x = next;
        }
        root
    }

    /// Unites the classes; the smaller id becomes the root. Returns `(root, absorbed)`.
    fn union(&mut self, a: VertexId, b: VertexId) -> Option<(VertexId, VertexId)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(child, root);
        Some((root, child))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Dir {
    Out,
    In,
}

/// Identifies same-label edges at a common vertex until the graph is
/// well-labeled.
///
/// Returns the folded graph with vertices renumbered `0..k` in order of the
/// smallest original vertex of each class, and the surjective vertex map.
pub fn fold(g: &LabeledGraph) -> (LabeledGraph, BTreeMap<VertexId, VertexId>) {
    let mut uf = UnionFind::new(g.vertices.iter().copied());
    // per class representative: (label, direction) -> neighbour (any member)
    let mut star: BTreeMap<VertexId, BTreeMap<(Gen, Dir), VertexId>> = BTreeMap::new();
    let mut pending: VecDeque<(VertexId, VertexId)> = VecDeque::new();

    let attach = |star: &mut BTreeMap<VertexId, BTreeMap<(Gen, Dir), VertexId>>,
                      pending: &mut VecDeque<(VertexId, VertexId)>,
                      at: VertexId,
                      key: (Gen, Dir),
                      to: VertexId| {
        let entry = star.entry(at).or_default();
        match entry.get(&key) {
            Some(&existing) if existing != to => pending.push_back((existing, to)),
            Some(_) => {}
            None => {
                entry.insert(key, to);
            }
        }
    };

    for e in &g.edges {
        attach(&mut star, &mut pending, e.src, (e.label, Dir::Out), e.dst);
        attach(&mut star, &mut pending, e.dst, (e.label, Dir::In), e.src);
    }

    while let Some((a, b)) = pending.pop_front() {
        let Some((root, child)) = uf.union(a, b) else {
            continue;
        };
        let moved = star.remove(&child).unwrap_or_default();
        for (key, to) in moved {
            let entry = star.entry(root).or_default();
            match entry.get(&key) {
                Some(&existing) => {
                    if uf.find(existing) != uf.find(to) {
                        pending.push_back((existing, to));
                    }
                }
                None => {
                    entry.insert(key, to);
                }
            }
        }
    }

    canonical_quotient(g, |v| uf.find(v))
}

/// Builds the quotient graph for a class map, numbering classes by their
/// smallest member.
fn canonical_quotient(
    g: &LabeledGraph,
    mut class_of: impl FnMut(VertexId) -> VertexId,
) -> (LabeledGraph, BTreeMap<VertexId, VertexId>) {
    let mut first_member: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let classes: Vec<(VertexId, VertexId)> =
        g.vertices.iter().map(|&v| (v, class_of(v))).collect();
    for &(v, c) in &classes {
        first_member.entry(c).or_insert(v);
    }
    let mut order: Vec<VertexId> = first_member.values().copied().collect();
    order.sort_unstable();
    let id_of_first: BTreeMap<VertexId, VertexId> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as VertexId))
        .collect();
    let map: BTreeMap<VertexId, VertexId> = classes
        .iter()
        .map(|&(v, c)| (v, id_of_first[&first_member[&c]]))
        .collect();
    let mut out = LabeledGraph::new();
    for &v in map.values() {
        out.add_vertex(v);
    }
    for e in &g.edges {
        out.add_edge(map[&e.src], map[&e.dst], e.label);
    }
    for (k, v) in &g.marks {
        out.set_mark(k, map[v]);
    }
    (out, map)
}

/// Folding by repeated full scans, for cross-checking [`fold`].
pub fn fold_naive(g: &LabeledGraph) -> (LabeledGraph, BTreeMap<VertexId, VertexId>) {
    let mut class: BTreeMap<VertexId, VertexId> = g.vertices.iter().map(|&v| (v, v)).collect();
    loop {
        let mut seen: BTreeMap<(VertexId, Gen, bool), VertexId> = BTreeMap::new();
        let mut merge = None;
        for e in &g.edges {
            let (s, d) = (class[&e.src], class[&e.dst]);
            for (at, key, to) in [(s, false, d), (d, true, s)] {
                match seen.get(&(at, e.label, key)) {
                    Some(&other) if other != to => {
                        merge = Some((other.min(to), other.max(to)));
                    }
                    _ => {
                        seen.insert((at, e.label, key), to);
                    }
                }
                if merge.is_some() {
                    break;
                }
            }
            if merge.is_some() {
                break;
            }
        }
        match merge {
            Some((keep, drop)) => {
                for c in class.values_mut() {
                    if *c == drop {
                        *c = keep;
                    }
                }
            }
            None => break,
        }
    }
    canonical_quotient(g, |v| class[&v])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QKind {
    OneCycle,
    TwoCycles,
    ThreeCycles,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QShape {
    pub kind: QKind,
    /// For [`QKind::ThreeCycles`]: the three branch paths, read from the
    /// lower-numbered branch vertex to the other one.
    pub components: Vec<Word>,
    /// Folding identified `v0` with `w·v0`.
    pub collision: bool,
    pub betti: usize,
}

/// Builds `fold(Q₀(c, w))` and classifies it.
///
/// `Q₀` is the union of `C(c, v0)`, `P(w, v0)` and `C(c, w·v0)` on otherwise
/// disjoint vertex sets.
pub fn build_q(c: &Word, w: &Word) -> Result<(LabeledGraph, QShape)> {
    if c.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !c.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(c.to_string()));
    }
    if !c.contains_alpha() {
        return Err(Error::InBetaSubgroup(c.to_string()));
    }
    if !w.is_reduced() {
        return Err(Error::NotReduced(w.to_string()));
    }
    if w.is_power_of(c).is_some() {
        return Err(Error::InCyclicSubgroup {
            word: w.to_string(),
            base: c.to_string(),
        });
    }
    let q0 = q_zero(c, w);
    let (q, _) = fold(&q0);
    let shape = classify(&q);
    Ok((q, shape))
}

/// The unfolded union `Q₀(c, w)`.
pub fn q_zero(c: &Word, w: &Word) -> LabeledGraph {
    let lc = c.len() as VertexId;
    let mut g = LabeledGraph::new();
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let v0 = fresh();
    let mut cur = v0;
    for (j, &l) in c.letters().iter().enumerate() {
        let to = if j as VertexId == lc - 1 { v0 } else { fresh() };
        g.add_letter_edge(cur, l, to);
        cur = to;
    }
    let mut cur = v0;
    for &l in w.letters() {
        let to = fresh();
        g.add_letter_edge(cur, l, to);
        cur = to;
    }
    let wv0 = cur;
    for (j, &l) in c.letters().iter().enumerate() {
        let to = if j as VertexId == lc - 1 { wv0 } else { fresh() };
        g.add_letter_edge(cur, l, to);
        cur = to;
    }
    g.add_vertex(v0);
    g.set_mark(MARK_START, v0);
    g.set_mark(MARK_END, wv0);
    g
}

/// Strips unmarked vertices of degree at most one until none remain.
pub fn core(g: &LabeledGraph) -> LabeledGraph {
    let marked: BTreeSet<VertexId> = g.marks.values().copied().collect();
    let mut vertices = g.vertices.clone();
    let mut edges = g.edges.clone();
    loop {
        let mut degree: BTreeMap<VertexId, usize> = vertices.iter().map(|&v| (v, 0)).collect();
        for e in &edges {
            *degree.get_mut(&e.src).unwrap() += 1;
            *degree.get_mut(&e.dst).unwrap() += 1;
        }
        let leaves: BTreeSet<VertexId> = degree
            .iter()
            .filter(|&(v, &d)| d <= 1 && !marked.contains(v))
            .map(|(&v, _)| v)
            .collect();
        if leaves.is_empty() {
            break;
        }
        vertices.retain(|v| !leaves.contains(v));
        edges.retain(|e| !leaves.contains(&e.src) && !leaves.contains(&e.dst));
    }
    LabeledGraph {
        vertices,
        edges,
        marks: g.marks.clone(),
    }
}

fn components(g: &LabeledGraph) -> usize {
    let mut uf = UnionFind::new(g.vertices.iter().copied());
    for e in &g.edges {
        uf.union(e.src, e.dst);
    }
    let vs: Vec<VertexId> = g.vertices.iter().copied().collect();
    vs.iter().map(|&v| uf.find(v)).collect::<BTreeSet<_>>().len()
}

pub fn betti_number(g: &LabeledGraph) -> usize {
    (g.edges.len() + components(g)).saturating_sub(g.vertices.len())
}

/// Classifies a folded `Q(c, w)` by the shape of its core.
pub fn classify(q: &LabeledGraph) -> QShape {
    let k = core(q);
    let betti = betti_number(&k);
    let collision = q.mark(MARK_START).is_some() && q.mark(MARK_START) == q.mark(MARK_END);
    let mut shape = QShape {
        kind: if betti <= 1 {
            QKind::OneCycle
        } else {
            QKind::TwoCycles
        },
        components: Vec::new(),
        collision,
        betti,
    };
    if betti != 2 {
        return shape;
    }
    // incident edge ends per vertex: (edge, leaving?)
    let edges: Vec<Edge> = k.edges.iter().copied().collect();
    let mut ends: BTreeMap<VertexId, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        ends.entry(e.src).or_default().push((i, true));
        ends.entry(e.dst).or_default().push((i, false));
    }
    let branch: Vec<VertexId> = ends
        .iter()
        .filter(|(_, v)| v.len() >= 3)
        .map(|(&v, _)| v)
        .collect();
    if branch.len() != 2 || ends[&branch[0]].len() != 3 || ends[&branch[1]].len() != 3 {
        return shape;
    }
    let (u, v) = (branch[0], branch[1]);
    let mut paths = Vec::new();
    for &(first_edge, leaving) in &ends[&u] {
        let mut letters = Vec::new();
        let (mut edge, mut forward) = (first_edge, leaving);
        let mut at;
        loop {
            let e = edges[edge];
            letters.push(Letter::new(e.label, !forward));
            at = if forward { e.dst } else { e.src };
            if at == u || at == v {
                break;
            }
            let next = ends[&at]
                .iter()
                .find(|&&(i, _)| i != edge)
                .copied()
                .expect("degree-2 vertex on a core path");
            edge = next.0;
            forward = next.1;
        }
        if at != v {
            return shape;
        }
        paths.push(Word::from_letters(letters));
    }
    shape.kind = QKind::ThreeCycles;
    shape.components = paths;
    shape
}

/// Searches for an injective label-preserving homomorphism `small → big`.
///
/// With an anchor `(s, b)` the search is restricted to maps sending `s` to `b`.
/// Both graphs must be well-labeled; in that case a connected component is
/// determined by the image of any one of its vertices.
pub fn embed_check(
    small: &LabeledGraph,
    big: &LabeledGraph,
    anchor: Option<(VertexId, VertexId)>,
) -> Option<BTreeMap<VertexId, VertexId>> {
    let small_adj = small.adjacency();
    let big_adj = big.adjacency();
    let mut neighbours: BTreeMap<VertexId, Vec<(Letter, VertexId)>> = BTreeMap::new();
    for e in &small.edges {
        neighbours
            .entry(e.src)
            .or_default()
            .push((Letter::pos(e.label), e.dst));
        neighbours
            .entry(e.dst)
            .or_default()
            .push((Letter::neg(e.label), e.src));
    }
    let _ = small_adj;

    // component roots, anchored component first
    let mut roots = Vec::new();
    let mut seen = BTreeSet::new();
    let mut order: Vec<VertexId> = small.vertices.iter().copied().collect();
    if let Some((s, _)) = anchor {
        if !small.vertices.contains(&s) {
            return None;
        }
        order.retain(|&v| v != s);
        order.insert(0, s);
    }
    for v in order {
        if seen.contains(&v) {
            continue;
        }
        roots.push(v);
        let mut queue = VecDeque::from([v]);
        seen.insert(v);
        while let Some(x) = queue.pop_front() {
            for &(_, y) in neighbours.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }

    fn propagate(
        root: VertexId,
        image: VertexId,
        neighbours: &BTreeMap<VertexId, Vec<(Letter, VertexId)>>,
        big_adj: &Adjacency,
        map: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        if used.contains(&image) {
            return false;
        }
        map.insert(root, image);
        used.insert(image);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let fx = map[&x];
            for &(l, y) in neighbours.get(&x).into_iter().flatten() {
                let Some(fy) = big_adj.step(fx, l) else {
                    return false;
                };
                match map.get(&y) {
                    Some(&existing) if existing != fy => return false,
                    Some(_) => {}
                    None => {
                        if !used.insert(fy) {
                            return false;
                        }
                        map.insert(y, fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        true
    }

    fn search(
        idx: usize,
        roots: &[VertexId],
        anchor: Option<(VertexId, VertexId)>,
        neighbours: &BTreeMap<VertexId, Vec<(Letter, VertexId)>>,
        big: &LabeledGraph,
        big_adj: &Adjacency,
        map: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        if idx == roots.len() {
            return true;
        }
        let root = roots[idx];
        let candidates: Vec<VertexId> = match anchor {
            Some((s, b)) if s == root => vec![b],
            _ => big.vertices.iter().copied().collect(),
        };
        for cand in candidates {
            let (saved_map, saved_used) = (map.clone(), used.clone());
            if propagate(root, cand, neighbours, big_adj, map, used)
                && search(idx + 1, roots, anchor, neighbours, big, big_adj, map, used)
            {
                return true;
            }
            *map = saved_map;
            *used = saved_used;
        }
        false
    }

    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    search(
        0,
        &roots,
        anchor,
        &neighbours,
        big,
        &big_adj,
        &mut map,
        &mut used,
    )
    .then_some(map)
}

/// Whether every cycle of `g` carries some `α`-label, i.e. the `β`-edges form
/// a forest of paths.
pub fn beta_acyclic(g: &LabeledGraph) -> bool {
    let mut beta = LabeledGraph::new();
    for &v in &g.vertices {
        beta.add_vertex(v);
    }
    for e in g.edges.iter().filter(|e| e.label == BETA) {
        beta.add_edge(e.src, e.dst, BETA);
    }
    betti_number(&beta) == 0
}
