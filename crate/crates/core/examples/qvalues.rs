//! Q-values, the Q-defect and inversion of `x + y` in (ℚH)Q.

use novikov_core::characters::Character;
use novikov_core::groups::parse::parse_word;
use novikov_core::groups::{FiniteGroup, FiniteQuotient, GroupContext};
use novikov_core::qcalc::QCalculus;
use novikov_core::ring::RingElement;
use novikov_core::value::{Rational, Value};

fn main() {
    let g = GroupContext::parse("raag { a, b; a-b }").unwrap();
    let quot = FiniteQuotient::new(g.presentation(), FiniteGroup::cyclic(2), vec![1, 0], None).unwrap();
    let phi = Character::integral(&[1, 3]);
    let calc = QCalculus::restricted(&g, &quot, &phi).unwrap();
    println!("ψ = {} on H, Q-defect {}", calc.character(), calc.qdefect());
    let names = g.names();
    for w in ["a", "b", "a^2", "a b^-1", "a^-3 b^2"] {
        let word = parse_word(w, names).unwrap();
        println!("qval({w}) = {}", calc.monomial_qvalue(&word).unwrap());
    }

    let one = Rational::from_integer(1.into());
    let sf = calc.structure();
    let x = sf.split(&RingElement::from_word(&g, &parse_word("a", names).unwrap(), one.clone()));
    let y = sf.split(&RingElement::from_terms(&g, [(parse_word("a^2 b", names).unwrap(), one.clone()), (parse_word("b^2", names).unwrap(), -one)]));
    let inv = calc.invert_sum(&x, &y, &Value::int(10)).unwrap();
    println!("margin {:?}, {} series terms, {} monomials in (x + y)⁻¹ mod qval 10", inv.margin.map(|m| m.to_string()), inv.terms, inv.z.len());
}
