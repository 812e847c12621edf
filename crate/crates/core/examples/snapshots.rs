//! Saving a factor action, reloading it, and exporting its Schreier graph.

use std::collections::BTreeSet;

use cyclic_pinch::extension::ActionState;
use cyclic_pinch::snapshot::{export_graph, import_graph_json, ActionSnapshot, ExportFormat};
use cyclic_pinch::word::{Alphabet, Word};

fn main() -> cyclic_pinch::Result<()> {
    let c: Word = "a1 b a1^-1 b^-1".parse()?;
    let mut state = ActionState::new(1, 0);
    state.embed_cycle(&c.pow(2), &BTreeSet::new())?;

    let path = std::env::temp_dir().join("cyclic_pinch_snapshot.json");
    ActionSnapshot::from_state(&state).save(&path)?;
    let back = ActionSnapshot::load(&path)?;
    assert_eq!(back.to_state()?, state);
    println!("round trip through {} ok", path.display());

    println!("{}", export_graph(&back, ExportFormat::Dot, false, Alphabet::First)?);
    let json = export_graph(&back, ExportFormat::Json, true, Alphabet::First)?;
    assert_eq!(import_graph_json(&json, 1, Alphabet::First)?, state.close());
    println!("json export re-imports to the same action");
    Ok(())
}
