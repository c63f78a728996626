//! ℚG as a crossed product (ℚH)Q for `H = ker(F₂ → ℤ/3)`.

use novikov_core::groups::parse::parse_word;
use novikov_core::groups::{FiniteGroup, FiniteQuotient, GroupContext};
use novikov_core::ring::RingElement;
use novikov_core::twisted::StructureFunctions;
use novikov_core::value::Rational;

fn main() {
    let g = GroupContext::parse("raag { a, b; }").unwrap();
    // a ↦ 1, b ↦ 2 in ℤ/3
    let quot = FiniteQuotient::new(g.presentation(), FiniteGroup::cyclic(3), vec![1, 2], None).unwrap();
    let sf = StructureFunctions::new(&g, &quot).unwrap();
    let names = g.names();
    for q in 0..quot.order() {
        println!("s({q}) = {}", sf.section_nf(q).display(names));
    }
    for q in 0..3 {
        for p in 0..3 {
            print!("  μ({q},{p}) = {:<10}", sf.mu(q, p).display(names).to_string());
        }
        println!();
    }

    let one = Rational::from_integer(1.into());
    let x = RingElement::from_terms(&g, [(parse_word("a b", names).unwrap(), one.clone()), (parse_word("a", names).unwrap(), one.clone())]);
    let y = RingElement::from_terms(&g, [(parse_word("b^2 a", names).unwrap(), one.clone()), (parse_word("1", names).unwrap(), -one)]);
    let (xs, ys) = (sf.split(&x), sf.split(&y));
    for (q, part) in xs.parts() {
        println!("x_{q} = {part}");
    }
    // the twisted product agrees with the product in ℚG
    let prod = sf.twisted_mul(&xs, &ys);
    assert_eq!(sf.reassemble(&prod), &x * &y);
    println!("x·y = {}", sf.reassemble(&prod));
}
