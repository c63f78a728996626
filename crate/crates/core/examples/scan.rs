//! Sampling primitive rays and scanning them, as `novikov scan` does.

use novikov_core::chain::ChainComplex;
use novikov_core::fibring::catalog::{find, sample_rays};
use novikov_core::fibring::{character_scan, Combined, CutoffPolicy};

fn main() {
    let ctx = find("F2xZ").unwrap().context().unwrap();
    let cc = ChainComplex::build(&ctx).unwrap();
    let rays = sample_rays(ctx.abelianization().rank, 12, 7);
    let report = character_scan(&cc, &rays, &CutoffPolicy::default());
    for e in &report.entries {
        if let Ok(v) = &e.result {
            println!("{:<14} {}", v.character.to_string(), v.verdict.name());
        }
    }
    println!(
        "fibred {} / not fibred {} / inconclusive {}",
        report.count(Combined::Fibred),
        report.count(Combined::NotFibredByRank),
        report.count(Combined::Inconclusive)
    );
}
