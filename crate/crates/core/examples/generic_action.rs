//! A finite stage of a generic action: scheduled conditions, orbit census,
//! witnesses and the `c`-fixed Følner sets.

use cyclic_pinch::generic::{build_generic_action, folner_ratio, folner_set, schedule, Budgets};
use cyclic_pinch::word::{reduced_words_up_to, Alphabet, Word};

fn main() -> cyclic_pinch::Result<()> {
    let c: Word = "a1 b a1^-1 b^-1".parse()?;
    let words: Vec<Word> = reduced_words_up_to(1, 2)
        .into_iter()
        .filter(|w| w.is_power_of(&c).is_none())
        .collect();
    let budgets = Budgets {
        powers: 3,
        witness_words: words,
        orbit_sizes: 4,
        copies: 2,
        intervals: 20,
    };
    let g = build_generic_action(&c, 1, &schedule(&c, &budgets)?, 0)?;
    println!("{} conditions, {} points used", g.conditions.len(), g.state.next_free());

    let report = g.report(8, Alphabet::First);
    println!("census (size: count) {:?}", report.census);
    println!("flags {:?}", report.flags);
    for wit in report.witnesses.iter().take(5) {
        println!("  {} moves {} to {}", wit.word, wit.x, wit.wx);
    }

    for k in [5, 10, 20] {
        let set = folner_set(&g.plan, &c, k, &g.closed)?.to_set();
        let rb = folner_ratio(&g.closed, &set, &"b".parse()?)?;
        let ra = folner_ratio(&g.closed, &set, &"a1".parse()?)?;
        println!("k = {k:>2}: |A b A|/|A| = {rb}, |A a1 A|/|A| = {ra}");
    }
    Ok(())
}
