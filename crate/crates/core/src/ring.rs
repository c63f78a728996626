//! The rational group ring `ℚG`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{Character, CompatibleOrder};
use crate::groups::parse::parse_word;
use crate::groups::{GroupContext, GroupError, Word};
use crate::value::{format_rational, parse_rational, Rational, Valuation, Value};

/// A finite sum `Σ x(g) g` keyed by normal forms, no zero coefficients.
#[derive(Clone)]
pub struct RingElement {
    ctx: GroupContext,
    terms: BTreeMap<Word, Rational>,
}

impl RingElement {
    pub fn zero(ctx: &GroupContext) -> Self {
        RingElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &GroupContext) -> Self {
        Self::monomial(ctx, Word::empty(), Rational::one())
    }

    /// `c · g` for a word already in normal form.
    pub fn monomial(ctx: &GroupContext, g: Word, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        RingElement { ctx: ctx.clone(), terms }
    }

    /// `c · w` for an arbitrary word.
    pub fn from_word(ctx: &GroupContext, w: &Word, c: Rational) -> Self {
        Self::monomial(ctx, ctx.nf(w.letters()), c)
    }

    /// Normalizes and collects arbitrary words.
    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(ctx: &GroupContext, terms: I) -> Self {
        let mut x = Self::zero(ctx);
        for (w, c) in terms {
            x.add_term(ctx.nf(w.letters()), c);
        }
        x
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    /// Adds `c · g` where `g` is a normal form.
    pub fn add_term(&mut self, g: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let slot = e.get_mut();
                if slot.is_integer() && c.is_integer() {
                    *slot = Rational::from_integer(slot.numer() + c.numer());
                } else {
                    *slot += c;
                }
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &Word) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    /// `Some((g, c))` when the element is `c · g` with `c ≠ 0`.
    pub fn as_monomial(&self) -> Option<(&Word, &Rational)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().expect("one term"))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.ctx);
        }
        RingElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(g, c)| (g.clone(), c * q)).collect() }
    }

    /// Multiplication on the left by the group element `g` (normal form).
    pub fn left_translate(&self, g: &Word) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (h, c) in &self.terms {
            out.add_term(self.ctx.mul_nf(g, h), c.clone());
        }
        out
    }

    pub fn right_translate(&self, g: &Word) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (h, c) in &self.terms {
            out.add_term(self.ctx.mul_nf(h, g), c.clone());
        }
        out
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Word) -> bool) -> Self {
        RingElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(g, _)| keep(g)).map(|(g, c)| (g.clone(), c.clone())).collect(),
        }
    }

    /// Applies a map on group elements (each image already a normal form,
    /// possibly in another context) and re-collects.
    pub fn map_support(&self, ctx: &GroupContext, mut f: impl FnMut(&Word) -> Word) -> Self {
        let mut out = Self::zero(ctx);
        for (g, c) in &self.terms {
            out.add_term(f(g), c.clone());
        }
        out
    }

    /// `φ(x) = min φ(supp x)`, `+∞` for `x = 0`.
    pub fn valuation(&self, phi: &Character) -> Valuation {
        self.terms
            .keys()
            .map(|g| phi.evaluate(&self.ctx, g))
            .min()
            .map_or(Valuation::Infinite, Valuation::Finite)
    }

    /// Terms with `φ < cutoff`.
    pub fn truncate(&self, phi: &Character, cutoff: &Valuation) -> Self {
        if cutoff.is_infinite() {
            return self.clone();
        }
        self.filter(|g| &Valuation::Finite(phi.evaluate(&self.ctx, g)) < cutoff)
    }

    /// The unique minimal support element in the compatible order, with a
    /// final shortlex tie-break between elements of equal abelian image.
    pub fn leading_term(&self, order: &CompatibleOrder) -> Option<(Word, Rational)> {
        let mut best: Option<(&Word, Vec<i64>)> = None;
        for g in self.terms.keys() {
            let a = self.ctx.abelian_coords(g);
            let better = match &best {
                None => true,
                Some((h, b)) => order.compare_coords(&a, b).then_with(|| g.cmp(h)) == Ordering::Less,
            };
            if better {
                best = Some((g, a));
            }
        }
        best.map(|(g, _)| (g.clone(), self.terms[g].clone()))
    }

    /// Support elements attaining `φ(x)`, in normal-form order.
    pub fn minimal_support(&self, phi: &Character) -> Vec<Word> {
        let vals: Vec<(&Word, Value)> = self.terms.keys().map(|g| (g, phi.evaluate(&self.ctx, g))).collect();
        let Some(min) = vals.iter().map(|(_, v)| v).min().cloned() else { return Vec::new() };
        vals.into_iter().filter(|(_, v)| *v == min).map(|(g, _)| g.clone()).collect()
    }

    /// Inverse of a monomial `c · g`.
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (g, c) = self.as_monomial()?;
        Some(Self::monomial(&self.ctx, self.ctx.inv_nf(g), c.recip()))
    }

    /// Augmentation `ε(x) = Σ x(g)`.
    pub fn augmentation(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = self.ctx.names();
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(g, c)| serde_json::json!({ "word": g.display(names).to_string(), "coeff": format_rational(c) }))
                .collect(),
        )
    }

    pub fn from_json(ctx: &GroupContext, v: &serde_json::Value) -> Result<Self, RingParseError> {
        let terms: Vec<TermJson> = serde_json::from_value(v.clone()).map_err(|e| RingParseError::Json(e.to_string()))?;
        let mut x = Self::zero(ctx);
        for t in terms {
            let w = parse_word(&t.word, ctx.names())?;
            let c = parse_rational(&t.coeff).map_err(|e| RingParseError::Json(e.to_string()))?;
            x.add_term(ctx.normalize(w.letters())?, c);
        }
        Ok(x)
    }

    fn assert_same(&self, other: &RingElement) {
        assert!(self.ctx.same(&other.ctx), "ring elements from different contexts");
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: String,
    coeff: String,
}

#[derive(Debug, thiserror::Error)]
pub enum RingParseError {
    #[error("ring element JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.ctx.names();
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if g.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", g.display(names))?;
            } else {
                write!(f, "{}·{}", format_rational(&mag), g.display(names))?;
            }
        }
        Ok(())
    }
}

impl Add<&RingElement> for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.assert_same(rhs);
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl Sub<&RingElement> for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.assert_same(rhs);
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), -c);
        }
        out
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect() }
    }
}

impl Mul<&RingElement> for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.assert_same(rhs);
        let mut out = RingElement::zero(&self.ctx);
        for (g, a) in &self.terms {
            for (h, b) in &rhs.terms {
                out.add_term(self.ctx.mul_nf(g, h), coeff_mul(a, b));
            }
        }
        out
    }
}

/// Product of coefficients, skipping the gcd when both are integers.
pub(crate) fn coeff_mul(a: &Rational, b: &Rational) -> Rational {
    if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RingElement {
            type Output = RingElement;
            fn $f(self, rhs: RingElement) -> RingElement {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Letter;
    use crate::value::rat;
    use proptest::prelude::*;

    fn el(ctx: &GroupContext, s: &str) -> RingElement {
        // "2 a b^-1 + -1 b" style: terms separated by '+', leading integer
        let mut x = RingElement::zero(ctx);
        for part in s.split('+') {
            let part = part.trim();
            let (c, w) = match part.split_once(' ') {
                Some((c, w)) if c.parse::<i64>().is_ok() => (c.parse().unwrap(), w),
                _ => (1, part),
            };
            let w = parse_word(w, ctx.names()).unwrap();
            x = &x + &RingElement::from_word(ctx, &w, rat(c));
        }
        x
    }

    #[test]
    fn examples() {
        let f2 = GroupContext::parse("raag { a, b; }").unwrap();
        let x = el(&f2, "2 a");
        let y = el(&f2, "3 b");
        assert_eq!(&x * &y, el(&f2, "6 a b"));
        assert_eq!(&x * &RingElement::one(&f2), x);
        let p = &el(&f2, "a + b") * &el(&f2, "a + -1 b");
        assert_eq!(p, el(&f2, "a^2 + b a + -1 a b + -1 b^2"));
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn valuation_and_leading_term() {
        let z2 = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1))]);
        let x = el(&z2, "2 a + 3 b");
        assert_eq!(x.valuation(&phi), Valuation::Finite(Value::int(1)));
        assert_eq!(RingElement::zero(&z2).valuation(&phi), Valuation::Infinite);
        let o = CompatibleOrder::new(phi);
        assert_eq!(x.leading_term(&o), Some((Word::gen(0), rat(2))));
        let zero = CompatibleOrder::new(Character::integral(&[0, 0]));
        assert_eq!(x.leading_term(&zero), Some((Word::gen(0), rat(2))));
        let m = el(&z2, "5 b");
        assert_eq!(m.leading_term(&o), Some((Word::gen(1), rat(5))));
    }

    #[test]
    fn json_round_trip() {
        let f2 = GroupContext::parse("raag { a, b; }").unwrap();
        let x = el(&f2, "2 a b + -1 b^-1");
        let back = RingElement::from_json(&f2, &x.to_json()).unwrap();
        assert_eq!(back, x);
        // unordered input with repeated words is collected
        let v = serde_json::json!([{"word": "b", "coeff": "1/2"}, {"word": "a", "coeff": "1"}, {"word": "b", "coeff": "1/2"}]);
        assert_eq!(RingElement::from_json(&f2, &v).unwrap(), el(&f2, "a + b"));
    }

    fn elements(n: usize) -> impl Strategy<Value = Vec<(Vec<(usize, bool)>, i64)>> {
        prop::collection::vec((prop::collection::vec((0..n, any::<bool>()), 0..4), -3i64..=3), 0..4)
    }

    fn build(ctx: &GroupContext, v: Vec<(Vec<(usize, bool)>, i64)>) -> RingElement {
        RingElement::from_terms(ctx, v.into_iter().map(|(w, c)| (w.into_iter().map(|(g, i)| Letter::new(g, i)).collect(), rat(c))))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in elements(3), y in elements(3), z in elements(3)) {
            let ctx = GroupContext::parse("raag { a, b, z; a-z, b-z }").unwrap();
            let (x, y, z) = (build(&ctx, x), build(&ctx, y), build(&ctx, z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        }

        #[test]
        fn leading_term_is_strictly_minimal(x in elements(2)) {
            let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
            let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1))]);
            let o = CompatibleOrder::new(phi.clone());
            let x = build(&ctx, x);
            prop_assume!(!x.is_zero());
            let (g, c) = x.leading_term(&o).unwrap();
            let rest = &x - &RingElement::monomial(&ctx, g.clone(), c);
            for h in rest.support() {
                prop_assert_eq!(o.compare(&ctx, &g, h), Ordering::Less);
            }
            // irrational φ: the rest has strictly larger valuation
            prop_assert!(rest.valuation(&phi) > x.valuation(&phi));
        }
    }
}
