//! JSON snapshots of factor actions, and graph export.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{window_graph, ActionState, ClosedAction, FinitePerm, LogStep};
use crate::generic::Interval;
use crate::graph::{GraphJson, LabeledGraph};
use crate::word::{Alphabet, BETA};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaCycles {
    pub cycles: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSnapshot {
    pub version: u32,
    pub rank: usize,
    pub origin: i64,
    pub next_free: i64,
    pub alphas: Vec<AlphaCycles>,
    pub reserved: Vec<i64>,
    pub log: Vec<LogStep>,
}

impl ActionSnapshot {
    pub fn from_state(state: &ActionState) -> Self {
        let closed = state.close();
        ActionSnapshot {
            version: SCHEMA_VERSION,
            rank: state.rank(),
            origin: state.origin(),
            next_free: state.next_free(),
            alphas: closed
                .alphas
                .iter()
                .map(|p| AlphaCycles { cycles: p.cycles() })
                .collect(),
            reserved: state.reserved().iter().copied().collect(),
            log: state.log().to_vec(),
        }
    }

    /// The closed action stored in the snapshot.
    pub fn closed(&self) -> Result<ClosedAction> {
        if self.alphas.len() != self.rank {
            return Err(Error::Invariant(format!(
                "{} alpha entries for rank {}",
                self.alphas.len(),
                self.rank
            )));
        }
        Ok(ClosedAction {
            rank: self.rank,
            alphas: self
                .alphas
                .iter()
                .map(|a| FinitePerm::from_cycles(&a.cycles))
                .collect::<Result<_>>()?,
        })
    }

    /// Rebuilds the state from the log and checks it against the stored cycles
    /// and reservations.
    pub fn to_state(&self) -> Result<ActionState> {
        self.check_version()?;
        let state = ActionState::replay(self.rank, self.origin, &self.log)?;
        if state.next_free() > self.next_free {
            return Err(Error::Invariant("log allocates past next_free".into()));
        }
        let rebuilt = ActionSnapshot::from_state(&state);
        if rebuilt.alphas != self.alphas || rebuilt.reserved != self.reserved {
            return Err(Error::Invariant(
                "stored cycles or reservations disagree with the log".into(),
            ));
        }
        Ok(state)
    }

    fn check_version(&self) -> Result<()> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: self.version,
                expected: SCHEMA_VERSION,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let snap: ActionSnapshot = serde_json::from_str(text)?;
        snap.check_version()?;
        Ok(snap)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        ActionSnapshot::from_json(&fs::read_to_string(path)?)
    }

    /// Every allocated point, or the origin alone for an empty state.
    pub fn window(&self) -> Interval {
        Interval::new(self.origin, (self.next_free - 1).max(self.origin))
    }

    pub fn window_graph(&self, with_beta: bool) -> Result<LabeledGraph> {
        let w = self.window();
        Ok(window_graph(&self.closed()?, w.lo, w.hi, with_beta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// The Schreier graph of the snapshot's window.
pub fn export_graph(
    snapshot: &ActionSnapshot,
    format: ExportFormat,
    with_beta: bool,
    alphabet: Alphabet,
) -> Result<String> {
    let g = snapshot.window_graph(with_beta)?;
    Ok(match format {
        ExportFormat::Dot => g.to_dot(alphabet),
        ExportFormat::Json => {
            serde_json::to_string_pretty(&g.to_json(alphabet)).expect("graph serializes")
        }
    })
}

/// Reads the `α`-permutations back from an exported JSON graph.
pub fn import_graph_json(text: &str, rank: usize, alphabet: Alphabet) -> Result<ClosedAction> {
    let json: GraphJson = serde_json::from_str(text)?;
    let g = LabeledGraph::from_json(&json, alphabet)?;
    let mut maps = vec![std::collections::BTreeMap::new(); rank];
    for e in g.edges().filter(|e| e.label != BETA) {
        if e.label > rank {
            return Err(Error::GeneratorOutOfRange { gen: e.label, rank });
        }
        maps[e.label - 1].insert(e.src, e.dst);
    }
    Ok(ClosedAction {
        rank,
        alphas: maps.into_iter().map(FinitePerm::from_map).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;
    use std::collections::BTreeSet;

    fn sample_state() -> ActionState {
        let c: Word = "a1 b a1^-1 b^-1".parse().unwrap();
        let mut s = ActionState::new(2, 0);
        s.reserve_interval(4, &BTreeSet::new());
        s.embed_cycle(&c.pow(3), &BTreeSet::new()).unwrap();
        s.embed_q_witness(&c, &"a2 b".parse().unwrap(), &BTreeSet::new())
            .unwrap();
        s
    }

    #[test]
    fn empty_round_trip() {
        let snap = ActionSnapshot::from_state(&ActionState::new(1, 0));
        let back = ActionSnapshot::from_json(&snap.to_json()).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.to_state().unwrap(), ActionState::new(1, 0));
    }

    #[test]
    fn state_round_trip() {
        let s = sample_state();
        let snap = ActionSnapshot::from_state(&s);
        let text = snap.to_json();
        let back = ActionSnapshot::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.to_state().unwrap(), s);
        assert_eq!(back.closed().unwrap(), s.close());
    }

    #[test]
    fn version_and_corruption() {
        let mut snap = ActionSnapshot::from_state(&sample_state());
        snap.version = 99;
        assert!(matches!(
            ActionSnapshot::from_json(&serde_json::to_string(&snap).unwrap()),
            Err(Error::SchemaVersion { found: 99, .. })
        ));
        assert!(ActionSnapshot::from_json("{\"version\": 1, \"rank\": ").is_err());
        let mut snap = ActionSnapshot::from_state(&sample_state());
        snap.alphas[0].cycles.pop();
        assert!(snap.to_state().is_err());
    }

    #[test]
    fn export_formats() {
        let empty = ActionSnapshot::from_state(&ActionState::new(1, 0));
        let dot = export_graph(&empty, ExportFormat::Dot, true, Alphabet::First).unwrap();
        assert!(!dot.contains("a1"));

        let s = sample_state();
        let snap = ActionSnapshot::from_state(&s);
        let json = export_graph(&snap, ExportFormat::Json, true, Alphabet::First).unwrap();
        assert_eq!(import_graph_json(&json, 2, Alphabet::First).unwrap(), s.close());
        let g = snap.window_graph(false).unwrap();
        assert_eq!(g.vertex_count(), snap.window().len());
    }
}
