//! Finite-index subgroups through Reidemeister–Schreier, two levels deep.

use novikov_core::groups::subgroup::subgroup_context;
use novikov_core::groups::{FiniteGroup, FiniteQuotient, GroupContext};

fn describe(label: &str, h: &GroupContext) {
    let ab = h.abelianization();
    println!("{label}: {} generators, {} relators, abelianization rank {} torsion {:?}", h.generators(), h.presentation().relators.len(), ab.rank, ab.torsion);
}

fn main() {
    let g = GroupContext::parse("raag { a, b, c; a-b, b-c }").unwrap();
    describe("G", &g);
    // c ↦ 1 in ℤ/2, the others trivial
    let q1 = FiniteQuotient::new(g.presentation(), FiniteGroup::cyclic(2), vec![0, 0, 1], None).unwrap();
    let h1 = subgroup_context(&g, &q1).unwrap();
    describe("H₁ = ker(G → ℤ/2)", &h1);
    for (i, w) in h1.subgroup_engine().unwrap().inclusion().iter().enumerate() {
        println!("  {} ↦ {}", h1.names()[i], w.display(g.names()));
    }

    let images: Vec<usize> = (0..h1.generators()).map(|i| usize::from(i == 0)).collect();
    let q2 = FiniteQuotient::new(h1.presentation(), FiniteGroup::cyclic(2), images, None).unwrap();
    let h2 = subgroup_context(&h1, &q2).unwrap();
    describe("H₂ = ker(H₁ → ℤ/2)", &h2);
}
