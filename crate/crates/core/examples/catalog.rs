//! Runs the consistency harness over every catalog entry.

use novikov_core::fibring::catalog::{catalog, consistency_harness};
use novikov_core::fibring::CutoffPolicy;

fn main() {
    let policy = CutoffPolicy::default();
    for e in catalog() {
        let r = consistency_harness(&e, 6, 1, &policy).unwrap();
        println!("{:<14} β₁ {:<4} {} samples {}", e.name, e.known_betti1.to_string(), r.scan.entries.len(), if r.pass { "agree" } else { "DISAGREE" });
        for d in &r.disagreements {
            println!("    {d}");
        }
    }
}
