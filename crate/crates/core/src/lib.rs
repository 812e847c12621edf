//! Finite-stage constructions of amenable, faithful and transitive actions of
//! cyclically pinched amalgams `F_{n+1} *_{<c=d>} F_{m+1}` on the integers.
//!
//! The crate is organised bottom-up:
//!
//! - [`word`]: free-group words, reduction, exponent sums, conjugacy by rotation.
//! - [`nielsen`]: Nielsen moves and the automorphism that zeroes an exponent sum.
//! - [`graph`]: well-labeled graphs, folding, the `Q(c, w)` graph and embeddings.
//! - [`extension`]: partial `α`-assignments over the shift graph of `Z` and their closure.
//! - [`generic`]: condition schedules, Følner intervals, orbit censuses and reports.
//! - [`amalgam`]: the intertwiner `σ` with `σc = dσ` and the amalgamated action.
//! - [`padding`]: census padding blocks that equalize orbit counts of two factors.
//! - [`snapshot`] and [`pipeline`]: persistence, export and the end-to-end driver.
//!
//! Throughout, `β` is the translation `x ↦ x + 1` of `Z` and words are stored
//! in application order: `letters()[0]` acts first.

pub mod amalgam;
pub mod error;
pub mod extension;
pub mod generic;
pub mod graph;
pub mod nielsen;
pub mod padding;
pub mod pipeline;
pub mod snapshot;
pub mod word;

pub use error::{Error, Result};
pub use word::{Letter, Word};
