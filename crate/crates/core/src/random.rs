//! Seeded random instances for the property suites and scans.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::characters::Character;
use crate::groups::{FiniteGroup, FiniteQuotient, GroupContext, Letter, Word};
use crate::ring::RingElement;
use crate::value::{rat, Rational, Value};

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word(rng: &mut Rng64, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))).collect()
}

fn coefficient(rng: &mut Rng64) -> Rational {
    let n = loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            break n;
        }
    };
    if rng.gen_bool(0.2) {
        Rational::new(n.into(), rng.gen_range(2i64..=3).into())
    } else {
        rat(n)
    }
}

/// Up to `terms` monomials with words of length `≤ max_len`.
pub fn element(rng: &mut Rng64, ctx: &GroupContext, terms: usize, max_len: usize) -> RingElement {
    let k = rng.gen_range(1..=terms);
    let mut out = RingElement::zero(ctx);
    for _ in 0..k {
        let w = word(rng, ctx.generators(), max_len);
        let c = coefficient(rng);
        out.add_term(ctx.nf(w.letters()), c);
    }
    out
}

/// An element of `ℚH` for `H = ker β`: random words pushed into `H` by the
/// section.
pub fn kernel_element(rng: &mut Rng64, ctx: &GroupContext, quot: &FiniteQuotient, terms: usize, max_len: usize) -> RingElement {
    let k = rng.gen_range(1..=terms);
    let mut out = RingElement::zero(ctx);
    for _ in 0..k {
        let w = word(rng, ctx.generators(), max_len);
        let (h, _) = ctx.coset_decompose(&ctx.nf(w.letters()), quot);
        let c = coefficient(rng);
        out.add_term(h, c);
    }
    out
}

/// Integer columns in `[-3, 3]`, optionally with a `√2` part making the
/// character injective on the free abelianization when the rank is two.
pub fn character(rng: &mut Rng64, rank: usize, irrational: bool) -> Character {
    loop {
        let cols: Vec<Value> = (0..rank)
            .map(|_| {
                let a = Value::int(rng.gen_range(-3..=3));
                if irrational {
                    &a + &Value::sqrt_prime(0, rat(rng.gen_range(-2..=2)))
                } else {
                    a
                }
            })
            .collect();
        let c = Character::new(cols);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Finite groups of order at most `max_order` used as random targets.
pub fn target_groups(max_order: usize) -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=max_order).map(FiniteGroup::cyclic).collect();
    for n in 2..=max_order / 2 {
        out.push(FiniteGroup::dihedral(n));
    }
    let c2 = FiniteGroup::cyclic(2);
    for m in [2, 3, 4, 6] {
        if 2 * m <= max_order {
            out.push(FiniteGroup::product(&c2, &FiniteGroup::cyclic(m)));
        }
    }
    if max_order >= 8 {
        out.push(FiniteGroup::product(&FiniteGroup::product(&c2, &c2), &c2));
    }
    if max_order >= 9 {
        out.push(FiniteGroup::product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3)));
    }
    out
}

/// A surjection onto a random group of order `≤ max_order` together with a
/// random section `s(q) = u · b(β(u)⁻¹q)`, where `b` is the shortlex section
/// and `u` a random word.
pub fn quotient(rng: &mut Rng64, ctx: &GroupContext, max_order: usize) -> FiniteQuotient {
    let groups = target_groups(max_order);
    let p = ctx.presentation();
    loop {
        let g = groups.choose(rng).expect("non-empty").clone();
        let images: Vec<usize> = (0..p.rank()).map(|_| rng.gen_range(0..g.order())).collect();
        let Ok(base) = FiniteQuotient::new(p, g.clone(), images.clone(), None) else { continue };
        let section = random_section(rng, ctx, &base);
        if let Ok(q) = FiniteQuotient::new(p, g, images, Some(section)) {
            return q;
        }
    }
}

pub fn random_section(rng: &mut Rng64, ctx: &GroupContext, base: &FiniteQuotient) -> Vec<Word> {
    let mut section = vec![Word::empty()];
    for q in 1..base.order() {
        let u = word(rng, ctx.generators(), 4);
        let rest = base.mul(base.inv(base.image(&u)), q);
        section.push(u.concat(base.section(rest)).free_reduce());
    }
    section
}

/// An element with a unique `φ`-least monomial `λg` and every other term of
/// value `> φ(g)`; returns it with the least gap.
pub fn strict_gap_element(rng: &mut Rng64, ctx: &GroupContext, phi: &Character, terms: usize, max_len: usize) -> (RingElement, Value) {
    loop {
        let lead = ctx.nf(word(rng, ctx.generators(), max_len).letters());
        let v0 = phi.evaluate(ctx, &lead);
        let mut x = RingElement::from_word(ctx, &lead, coefficient(rng));
        let mut gap: Option<Value> = None;
        for _ in 0..terms {
            let h = ctx.nf(word(rng, ctx.generators(), max_len).letters());
            let d = &phi.evaluate(ctx, &h) - &v0;
            if d.is_positive() && x.coeff(&h) == rat(0) {
                gap = Some(match gap {
                    Some(g) if g < d => g,
                    _ => d,
                });
                x.add_term(h, coefficient(rng));
            }
        }
        if let Some(g) = gap {
            return (x, g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let ctx = GroupContext::parse("raag { a, b, c; a-b, b-c }").unwrap();
        let a = quotient(&mut rng(7), &ctx, 12);
        let b = quotient(&mut rng(7), &ctx, 12);
        assert_eq!(a.images(), b.images());
        assert_eq!(a.sections(), b.sections());
        let x = element(&mut rng(3), &ctx, 4, 5);
        assert_eq!(x, element(&mut rng(3), &ctx, 4, 5));
    }

    #[test]
    fn strict_gap_elements_have_gaps() {
        let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1))]);
        let mut r = rng(1);
        for _ in 0..20 {
            let (x, gap) = strict_gap_element(&mut r, &ctx, &phi, 4, 4);
            assert!(gap.is_positive());
            assert!(x.len() >= 2);
        }
    }
}
