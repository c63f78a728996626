//! Inverting `1 - t` and `2 + a + b·a` in Novikov completions.

use novikov_core::characters::Character;
use novikov_core::groups::parse::parse_word;
use novikov_core::groups::GroupContext;
use novikov_core::novikov::NovikovRing;
use novikov_core::ring::RingElement;
use novikov_core::value::{Rational, Valuation, Value};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn main() {
    let z = GroupContext::parse("raag { t; }").unwrap();
    let ring = NovikovRing::new(&z, &Character::integral(&[1])).unwrap();
    let t = parse_word("t", z.names()).unwrap();
    let x = ring.exact(&RingElement::one(&z) - &RingElement::from_word(&z, &t, q(1)));
    let inv = x.invert(&Valuation::Finite(Value::int(6))).unwrap();
    println!("(1 - t)^-1 = {} + O(t^{})", inv.body(), inv.cutoff());

    // In F2 with φ(a) = 1, φ(b) = 2 the unit 2 dominates.
    let f2 = GroupContext::parse("raag { a, b; }").unwrap();
    let ring = NovikovRing::new(&f2, &Character::integral(&[1, 2])).unwrap();
    let body = RingElement::from_terms(
        &f2,
        [
            (parse_word("1", f2.names()).unwrap(), q(2)),
            (parse_word("a", f2.names()).unwrap(), q(1)),
            (parse_word("b a", f2.names()).unwrap(), q(-1)),
        ],
    );
    let x = ring.exact(body);
    let inv = x.invert(&Valuation::Finite(Value::int(4))).unwrap();
    println!("{} terms below value 4", inv.body().len());
    let check = x.mul(&inv).unwrap();
    println!("x·x⁻¹ = {} + O({})", check.body(), check.cutoff());
}
