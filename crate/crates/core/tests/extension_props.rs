mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use cyclic_pinch::extension::ActionState;
use cyclic_pinch::word::{Letter, Word};

#[derive(Clone, Debug)]
enum Op {
    Path(Word),
    Cycle(Word),
    Witness(Word),
}

fn word(rank_alpha: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..=rank_alpha, any::<bool>()), 1..max).prop_map(|v| {
        Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()).free_reduce()
    })
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        word(2, 8).prop_map(Op::Path),
        word(2, 8).prop_map(Op::Cycle),
        word(2, 6).prop_map(Op::Witness),
    ]
}

fn base() -> Word {
    "a1 b a2 b^-1".parse().unwrap()
}

/// Runs the ops, skipping inputs the engine rejects, and checks the state
/// after every successful step.
fn run(ops: &[Op], forbidden: &BTreeSet<i64>) -> Result<ActionState, TestCaseError> {
    let mut s = ActionState::new(2, 0);
    for op in ops {
        let before = s.log().to_vec();
        match op {
            Op::Path(w) if !w.is_empty() => {
                let (x, y) = s.embed_path(w, forbidden).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(eval(&s.close(), w, x), y);
            }
            Op::Cycle(w) => {
                let (_, core) = w.cyclic_reduce();
                if core.is_empty() || beta_sum(core.letters()) != 0 || !core.contains_alpha() {
                    continue;
                }
                let x = s.embed_cycle(&core, forbidden).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(eval(&s.close(), &core, x), x);
            }
            Op::Witness(w) if !w.is_empty() && w.is_power_of(&base()).is_none() => {
                let x = s.embed_q_witness(&base(), w, forbidden).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let a = s.close();
                let wx = eval(&a, w, x);
                prop_assert!(wx != x);
                prop_assert_eq!(eval(&a, &base(), x), x);
                prop_assert_eq!(eval(&a, &base(), wx), wx);
            }
            _ => continue,
        }
        prop_assert!(s.audit().is_ok());
        // existing assignments are never rewritten
        prop_assert_eq!(&s.log()[..before.len()], &before[..]);
    }
    Ok(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn engine_invariants(ops in prop::collection::vec(op(), 1..8)) {
        let s = run(&ops, &BTreeSet::new())?;
        let replayed = ActionState::replay(2, 0, s.log()).unwrap();
        prop_assert_eq!(&replayed, &s);
        let again = run(&ops, &BTreeSet::new())?;
        prop_assert_eq!(&again, &s);
    }

    #[test]
    fn forbidden_points_stay_free(
        ops in prop::collection::vec(op(), 1..6),
        forbidden in prop::collection::btree_set(0i64..80, 0..10),
    ) {
        let s = run(&ops, &forbidden)?;
        prop_assert!(forbidden.iter().all(|x| !s.reserved().contains(x)));
    }

    #[test]
    fn closed_orbits_are_finite(ops in prop::collection::vec(op(), 1..6)) {
        let s = run(&ops, &BTreeSet::new())?;
        let a = s.close();
        let (lo, hi) = (s.origin() - 10, s.next_free() + 10);
        let limit = (hi - lo) as usize + 1;
        for x in lo..=hi {
            prop_assert!(orbit(&a, &base(), x, limit).is_some());
        }
        // far away the base word acts trivially
        prop_assert_eq!(eval(&a, &base(), hi + 100), hi + 100);
    }
}
