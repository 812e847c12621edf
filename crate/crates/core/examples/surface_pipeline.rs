//! Genus-g surface group as an amalgam of two free groups, end to end.
//!
//! `cargo run --example surface_pipeline -- 3`

use cyclic_pinch::pipeline::{run_pipeline, surface_preset};

fn main() -> cyclic_pinch::Result<()> {
    let genus: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("genus is a number"))
        .unwrap_or(2);
    let config = surface_preset(genus)?;
    println!("c = {}", config.c);
    println!("d = {}", config.d);

    let run = run_pipeline(&config)?;
    let r = &run.report;
    println!("transported: {}", r.transported);
    println!("G census {:?}", r.g.census);
    println!("H census {:?}", r.h.census);
    println!(
        "sigma moves {} points, {} orbit matches, {} pins",
        r.sigma.moved_points, r.sigma.orbit_matches, r.sigma.pinned
    );
    for f in r.folner.iter().filter(|f| f.num != 0) {
        println!("  k={} {}: {}/{}", f.k, f.generator, f.num, f.den);
    }
    for a in &r.amalgam {
        println!("  {} -> {}: x0={} image={}", a.word, a.normal_form, a.x0, a.image);
    }
    for (name, ok) in &r.checks {
        println!("{:<18} {}", name, if *ok { "ok" } else { "FAILED" });
    }
    println!("passed: {}", run.passed());
    Ok(())
}
