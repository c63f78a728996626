//! Left Fox derivatives and the fundamental identity
//! `w - 1 = Σ ∂w/∂x_j · (x_j - 1)`.

use novikov_core::chain::{fox_derivative, ChainComplex};
use novikov_core::groups::parse::parse_word;
use novikov_core::groups::GroupContext;
use novikov_core::ring::RingElement;
use novikov_core::value::Rational;

fn main() {
    let ctx = GroupContext::parse("raag { a, b; }").unwrap();
    let w = parse_word("a b a^-1 b^-1 a^2", ctx.names()).unwrap();
    let mut sum = RingElement::zero(&ctx);
    for j in 0..ctx.generators() {
        let d = fox_derivative(&ctx, &w, j);
        println!("∂/∂{} = {d}", ctx.names()[j]);
        let x = ctx.generator(j).into_word();
        let xm1 = &RingElement::from_word(&ctx, &x, Rational::from_integer(1.into())) - &RingElement::one(&ctx);
        sum = &sum + &(&d * &xm1);
    }
    let lhs = &RingElement::from_word(&ctx, &w, Rational::from_integer(1.into())) - &RingElement::one(&ctx);
    assert_eq!(sum, lhs);
    println!("identity holds for {}", ctx.presentation().word_to_string(&w));

    // The Jacobian of a presentation and the chain complex check d1 ∘ d2 = 0.
    let bs = GroupContext::parse(novikov_core::fibring::catalog::BS12).unwrap();
    let cc = ChainComplex::build(&bs).unwrap();
    cc.check().unwrap();
    for (j, d) in cc.d2()[0].iter().enumerate() {
        println!("BS(1,2) ∂r/∂{} = {d}", bs.names()[j]);
    }
}
