//! Free abelianization of a few presentations, via Smith normal form.

use novikov_core::groups::abelian::free_abelianization;
use novikov_core::groups::parse::parse_relators;
use novikov_core::groups::GroupContext;

fn main() {
    for src in ["raag { a, b; }", "pres { a, b | a b a b }", "raag { a, b, c; a-b, b-c }", "pres { a, b | a^2 b^-3, [a, b] }"] {
        let (names, rels) = parse_relators(src).expect("valid source");
        let ab = free_abelianization(names.len(), &rels);
        println!("{src}\n  rank {} torsion {:?} projection {:?}", ab.rank, ab.torsion, ab.projection);
    }

    // A context carries the same data once an engine is attached.
    let ctx = GroupContext::parse("raag { x, y, z; x-y }").unwrap();
    println!("context rank {}", ctx.abelianization().rank);
}
