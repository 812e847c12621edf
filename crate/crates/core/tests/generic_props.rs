mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use cyclic_pinch::generic::{build_generic_action, folner_set, schedule, Budgets};
use cyclic_pinch::word::Word;

const BASES: [&str; 4] = [
    "a1 b a1^-1 b^-1",
    "a1 b a2 b^-1",
    "b a1^2 b^-1 a2^-1",
    "a1 b a1^-1 b^-1 a2 a2",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn budgets_are_discharged(
        which in 0..BASES.len(),
        powers in 1usize..4,
        sizes in 1usize..4,
        copies in 1usize..3,
        intervals in 1usize..12,
        origin in -50i64..50,
    ) {
        let c: Word = BASES[which].parse().unwrap();
        let witness_words: Vec<Word> = ["a1", "a2 b", "b a1^-1 a2"].iter().map(|s| s.parse().unwrap()).collect();
        let budgets = Budgets { powers, witness_words: witness_words.clone(), orbit_sizes: sizes, copies, intervals };
        let g = build_generic_action(&c, 2, &schedule(&c, &budgets).unwrap(), origin).unwrap();
        prop_assert!(g.state.audit().is_ok());
        let a = &g.closed;
        let win = g.window(8);
        for s in 1..=sizes {
            prop_assert!(census_at(a, &c, win.lo, win.hi, s) >= copies, "size {}", s);
        }
        for x in witness_words.iter().filter(|x| x.is_power_of(&c).is_none()) {
            prop_assert!(win.points().any(|p| eval(a, x, p) != p), "{} moves nothing", x);
        }
        for k in 1..=intervals {
            let set: BTreeSet<i64> = folner_set(&g.plan, &c, k, a).unwrap().points().collect();
            prop_assert_eq!(set.len(), k);
            for gen in 1..=2 {
                let u = Word::letter(gen);
                prop_assert!(set.iter().all(|&p| eval(a, &u, p) == p));
            }
            let leave = set.iter().filter(|&&p| !set.contains(&(p + 1))).count();
            prop_assert_eq!(leave, 1);
        }
    }
}
