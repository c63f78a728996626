//! Q-values and Q-defects of characters of a finite-index normal subgroup.
//!
//! Elements of `(ℚH)Q` are [`CosetSplitElement`]s over the parent group;
//! their `H`-parts are parent words lying in `H`, translated to `H`-words
//! through the subgroup engine whenever a character of `H` is evaluated.

use serde_json::json;
use thiserror::Error;

use crate::characters::{Character, CharacterError};
use crate::groups::subgroup::subgroup_context;
use crate::groups::{FiniteQuotient, GroupContext, GroupError, Word};
use crate::ring::RingElement;
use crate::twisted::{CosetSplitElement, StructureFunctions, TwistedError};
use crate::value::{Rational, Valuation, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QError {
    #[error("hypothesis fails: margin {0} is not positive")]
    HypothesisViolation(String),
    #[error("no unique Q-value minimal monomial in {0}")]
    StrictGapViolation(String),
    #[error("cannot invert zero")]
    ZeroElement,
    #[error("character rank {found} does not match H rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("series did not reach the cutoff after {0} terms")]
    NoConvergence(usize),
    #[error("post-condition failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
}

const MAX_TERMS: usize = 10_000;

/// A character `ψ` of `H = ker(G → Q)` with its conjugates `ψ^p` and the
/// section shifts `ψ(s(q)^{|Q|}) / |Q|`.
#[derive(Clone, Debug)]
pub struct QCalculus {
    sf: StructureFunctions,
    h: GroupContext,
    psi: Character,
    conj: Vec<Character>,
    shift: Vec<Value>,
    defect: Value,
}

impl QCalculus {
    pub fn new(g: &GroupContext, quot: &FiniteQuotient, psi: Character) -> Result<Self, QError> {
        let h = subgroup_context(g, quot)?;
        Self::with_subgroup(StructureFunctions::new(g, quot)?, h, psi)
    }

    /// `ψ = φ|H` for a character of the parent.
    pub fn restricted(g: &GroupContext, quot: &FiniteQuotient, phi: &Character) -> Result<Self, QError> {
        let h = subgroup_context(g, quot)?;
        let psi = if h.subgroup_engine().is_some() { phi.restrict(g, &h)? } else { phi.clone() };
        Self::with_subgroup(StructureFunctions::new(g, quot)?, h, psi)
    }

    pub fn with_subgroup(sf: StructureFunctions, h: GroupContext, psi: Character) -> Result<Self, QError> {
        let expected = h.abelianization().rank;
        if psi.rank() != expected {
            return Err(QError::RankMismatch { expected, found: psi.rank() });
        }
        let n = sf.quotient().order();
        let conj = if h.subgroup_engine().is_some() {
            (0..n).map(|p| psi.conjugate(&h, p)).collect::<Result<Vec<_>, _>>()?
        } else {
            vec![psi.clone(); n]
        };
        let mut calc = QCalculus { sf, h, psi, conj, shift: Vec::new(), defect: Value::zero() };
        let order = Rational::from_integer(n.into());
        let mut shift = Vec::with_capacity(n);
        for q in 0..n {
            let power = calc.sf.section_nf(q).pow(n as i64);
            let hw = calc.h_word(&power)?;
            shift.push(calc.psi.evaluate(&calc.h, &hw).scale(&order.recip()));
        }
        calc.shift = shift;
        calc.defect = calc.compute_defect()?;
        Ok(calc)
    }

    pub fn structure(&self) -> &StructureFunctions {
        &self.sf
    }

    pub fn subgroup(&self) -> &GroupContext {
        &self.h
    }

    pub fn character(&self) -> &Character {
        &self.psi
    }

    pub fn conjugate(&self, p: usize) -> &Character {
        &self.conj[p]
    }

    /// `qval(q) = ψ(s(q)^{|Q|}) / |Q|`.
    pub fn shift(&self, q: usize) -> &Value {
        &self.shift[q]
    }

    /// `|ψ|_Q`.
    pub fn qdefect(&self) -> &Value {
        &self.defect
    }

    /// The `H`-normal form of a parent word lying in `H`.
    pub fn h_word(&self, g: &Word) -> Result<Word, QError> {
        Ok(match self.h.subgroup_engine() {
            Some(eng) => eng.restrict(g)?,
            None => self.h.normalize(g.letters())?,
        })
    }

    /// `min_p ψ^p(h)` for a parent word in `H`.
    pub fn value_h_word(&self, g: &Word) -> Result<Value, QError> {
        let hw = self.h_word(g)?;
        Ok(self.conj.iter().map(|c| c.evaluate(&self.h, &hw)).min().expect("Q is non-empty"))
    }

    /// `min_p ψ^p(x)` for `x ∈ ℚH`.
    pub fn value_h(&self, x: &RingElement) -> Result<Valuation, QError> {
        let mut best = Valuation::Infinite;
        for g in x.support() {
            let v = Valuation::Finite(self.value_h_word(g)?);
            if v < best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Q-value of the monomial `g = h s(q)` of `ℚG`.
    pub fn monomial_qvalue(&self, g: &Word) -> Result<Value, QError> {
        let (h, q) = self.sf.context().coset_decompose(g, self.sf.quotient());
        Ok(&self.value_h_word(&h)? + &self.shift[q])
    }

    pub fn qvalue(&self, x: &CosetSplitElement) -> Result<Valuation, QError> {
        let mut best = Valuation::Infinite;
        for (&q, xq) in x.parts() {
            let v = self.value_h(xq)?.add_value(&self.shift[q]);
            if v < best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Q-value of a `ℚG` element through its coset splitting.
    pub fn qvalue_g(&self, x: &RingElement) -> Result<Valuation, QError> {
        self.qvalue(&self.sf.split(x))
    }

    fn compute_defect(&self) -> Result<Value, QError> {
        let n = self.sf.quotient().order();
        let mut worst = Value::zero();
        for p in 0..n {
            for q in 0..n {
                let pq = self.sf.quotient().mul(p, q);
                let v = self.value_h_word(self.sf.mu(p, q))?;
                let d = (&(&(&v - &self.shift[p]) - &self.shift[q]) + &self.shift[pq]).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }

    /// Drops the monomials of Q-value `≥ t`; the remainder has Q-value `≥ t`.
    pub fn truncate(&self, x: &RingElement, t: &Value) -> Result<RingElement, QError> {
        let mut keep = Vec::new();
        for (g, c) in x.terms() {
            if &self.monomial_qvalue(g)? < t {
                keep.push((g.clone(), c.clone()));
            }
        }
        Ok(RingElement::from_terms(x.context(), keep))
    }

    /// `(x + y)⁻¹ = Σ_i (-x⁻¹y)^i x⁻¹` modulo Q-value `cutoff`.
    ///
    /// `x` must have a unique monomial of least Q-value; its other terms
    /// are moved into `y`, and the hypothesis
    /// `qval(y) + qval(x⁻¹) - 2|ψ|_Q > 0` is checked for that split.
    pub fn invert_sum(&self, x: &CosetSplitElement, y: &CosetSplitElement, cutoff: &Value) -> Result<InvertedSum, QError> {
        let ctx = self.sf.context();
        let xg = self.sf.reassemble(x);
        let yg = self.sf.reassemble(y);
        let (lead, coeff) = self.unique_minimal_monomial(&xg)?;
        let x0 = RingElement::from_word(ctx, &lead, coeff.clone());
        let y = &yg + &(&xg - &x0);
        let x_inv = x0.monomial_inverse().expect("monomial");
        let v_inv = self.monomial_qvalue(&ctx.inv_nf(&lead))?;
        let v_y = self.qvalue_g(&y)?;
        let margin = v_y.add_value(&(&v_inv - &self.defect.scale_int(2)));
        if let Valuation::Finite(m) = &margin {
            if !m.is_positive() {
                return Err(QError::HypothesisViolation(m.to_string()));
            }
        }
        let sum = &x0 + &y;
        // errors of Q-value ≥ `t` in z change (x+y)z and z(x+y) only above
        // `cutoff` when t = cutoff - min(qval(x0), qval(y)) + |ψ|_Q
        let v_sum = self.qvalue_g(&sum)?.finite().cloned().ok_or(QError::ZeroElement)?;
        let t = &(cutoff - &v_sum) + &self.defect;
        // powers are kept one defect above the term threshold
        let t_pow = &(&t - &v_inv) + &self.defect;
        let a = -&(&x_inv * &y);
        let mut power = RingElement::one(ctx);
        let mut z = RingElement::zero(ctx);
        let mut terms = 0;
        while !power.is_zero() {
            if terms >= MAX_TERMS {
                return Err(QError::NoConvergence(terms));
            }
            z = &z + &self.truncate(&(&power * &x_inv), &t)?;
            power = self.truncate(&(&power * &a), &t_pow)?;
            terms += 1;
        }
        let one = RingElement::one(ctx);
        for (side, r) in [("(x+y)z", &one - &(&sum * &z)), ("z(x+y)", &one - &(&z * &sum))] {
            if let Valuation::Finite(v) = self.qvalue_g(&r)? {
                if &v < cutoff {
                    return Err(QError::VerificationFailed(format!("{side} ≢ 1 (residual Q-value {v})")));
                }
            }
        }
        Ok(InvertedSum {
            split: self.sf.split(&z),
            z,
            margin: margin.finite().cloned(),
            terms,
            cutoff: cutoff.clone(),
        })
    }

    fn unique_minimal_monomial(&self, x: &RingElement) -> Result<(Word, Rational), QError> {
        let mut best: Option<(Value, Word, Rational)> = None;
        let mut tie = false;
        for (g, c) in x.terms() {
            let v = self.monomial_qvalue(g)?;
            match &best {
                Some((b, _, _)) if &v > b => {}
                Some((b, _, _)) if &v == b => tie = true,
                _ => {
                    best = Some((v, g.clone(), c.clone()));
                    tie = false;
                }
            }
        }
        let (_, g, c) = best.ok_or(QError::ZeroElement)?;
        if tie {
            return Err(QError::StrictGapViolation(x.to_string()));
        }
        Ok((g, c))
    }

    pub fn report(&self, x: &CosetSplitElement, margin: Option<&Value>) -> Result<serde_json::Value, QError> {
        let len = self.psi.basis_len();
        Ok(json!({
            "qvalue": self.qvalue(x)?.to_json(len),
            "qdefect": self.defect.to_strings(len),
            "margin": margin.map(|m| json!(m.to_strings(len))).unwrap_or(json!("inf")),
        }))
    }
}

#[derive(Clone, Debug)]
pub struct InvertedSum {
    pub z: RingElement,
    pub split: CosetSplitElement,
    /// `qval(y) + qval(x⁻¹) - 2|ψ|_Q`, absent when `y = 0`.
    pub margin: Option<Value>,
    pub terms: usize,
    pub cutoff: Value,
}

/// The inequalities satisfied by Q-values, checked on one instance each.
/// Returns the name of the first failing item.
pub fn check_inequalities(
    calc: &QCalculus,
    x: &RingElement,
    y: &RingElement,
    z: &CosetSplitElement,
    w: &CosetSplitElement,
    q: usize,
) -> Result<(), String> {
    let sf = calc.structure();
    let err = |e: QError| e.to_string();
    let vx = calc.value_h(x).map_err(err)?;
    let vy = calc.value_h(y).map_err(err)?;
    let vz = calc.qvalue(z).map_err(err)?;
    let vw = calc.qvalue(w).map_err(err)?;
    let defect = calc.qdefect();
    // x^{q⁻¹} = s(q) x s(q)⁻¹
    if calc.value_h(&sf.nu(q, x)).map_err(err)? != vx {
        return Err("conjugation invariance".into());
    }
    let xs = CosetSplitElement::single(0, x.clone());
    let right = sf.twisted_mul(&xs, &sf.basis(q));
    let left = sf.twisted_mul(&sf.basis(q), &xs);
    let expect = vx.add_value(calc.shift(q));
    if calc.qvalue(&right).map_err(err)? != expect || calc.qvalue(&left).map_err(err)? != expect {
        return Err("translation by q".into());
    }
    if calc.value_h(&(x * y)).map_err(err)? < &vx + &vy {
        return Err("product in ℚH".into());
    }
    if calc.value_h(&(x + y)).map_err(err)? < vx.clone().min(vy.clone()) {
        return Err("sum in ℚH".into());
    }
    if calc.qvalue(&sf.twisted_add(z, w)).map_err(err)? < vz.clone().min(vw.clone()) {
        return Err("sum in (ℚH)Q".into());
    }
    let bound = (&vz + &vw).add_value(&-defect);
    if calc.qvalue(&sf.twisted_mul(z, w)).map_err(err)? < bound {
        return Err("product in (ℚH)Q".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::value::{rat, ratio};

    fn z_mod_2() -> (GroupContext, FiniteQuotient) {
        let ctx = GroupContext::parse("raag { t; }").unwrap();
        let q = FiniteQuotient::new(ctx.presentation(), FiniteGroup::cyclic(2), vec![1], None).unwrap();
        (ctx, q)
    }

    #[test]
    fn qvalue_examples() {
        let (ctx, quot) = z_mod_2();
        let calc = QCalculus::restricted(&ctx, &quot, &Character::integral(&[1])).unwrap();
        let sf = calc.structure();
        assert_eq!(calc.qvalue(&sf.basis(1)).unwrap(), Valuation::Finite(Value::int(1)));
        assert_eq!(calc.qvalue(&CosetSplitElement::zero()).unwrap(), Valuation::Infinite);
        assert!(calc.qdefect().is_zero());
        let x = RingElement::from_terms(&ctx, [(Word::gen(0).pow(3), rat(2)), (Word::gen(0).pow(-2), rat(1))]);
        assert_eq!(calc.qvalue_g(&x).unwrap(), Valuation::Finite(Value::int(-2)));
    }

    #[test]
    fn trivial_quotient_has_no_defect() {
        let ctx = GroupContext::parse("raag { a, b; }").unwrap();
        let quot = FiniteQuotient::new(ctx.presentation(), FiniteGroup::cyclic(1), vec![0, 0], None).unwrap();
        let calc = QCalculus::new(&ctx, &quot, Character::integral(&[2, -1])).unwrap();
        assert!(calc.qdefect().is_zero());
    }

    #[test]
    fn non_extending_character_on_free_kernel() {
        let ctx = GroupContext::parse("raag { a, b; }").unwrap();
        let quot = FiniteQuotient::new(ctx.presentation(), FiniteGroup::cyclic(2), vec![1, 0], None).unwrap();
        let h = subgroup_context(&ctx, &quot).unwrap();
        assert_eq!(h.generators(), 3);
        let psi = Character::integral(&[1, 0, 0]);
        let calc = QCalculus::new(&ctx, &quot, psi).unwrap();
        // brute force over the four pairs
        let sf = calc.structure();
        let mut worst = Value::zero();
        for p in 0..2 {
            for q in 0..2 {
                let pq = (p + q) % 2;
                let mu = calc.value_h_word(sf.mu(p, q)).unwrap();
                let d = (&(&(&mu - calc.shift(p)) - calc.shift(q)) + calc.shift(pq)).abs();
                worst = worst.max(d);
            }
        }
        assert_eq!(calc.qdefect(), &worst);
        // swapping the two cosets moves ψ off the first generator
        assert_ne!(calc.conjugate(1), calc.character());
    }

    #[test]
    fn invert_sum_examples() {
        let (ctx, quot) = z_mod_2();
        let calc = QCalculus::restricted(&ctx, &quot, &Character::integral(&[1])).unwrap();
        let sf = calc.structure();
        let one = CosetSplitElement::single(0, RingElement::one(&ctx));
        // y = t at Q-value 1
        let y = sf.split(&RingElement::from_word(&ctx, &Word::gen(0), rat(1)));
        let cutoff = Value::int(4);
        let inv = calc.invert_sum(&one, &y, &cutoff).unwrap();
        let expect =
            RingElement::from_terms(&ctx, (0..4).map(|i| (Word::gen(0).pow(i), if i % 2 == 0 { rat(1) } else { rat(-1) })));
        assert_eq!(inv.z, expect);
        let inv = calc.invert_sum(&one, &CosetSplitElement::zero(), &cutoff).unwrap();
        assert_eq!(inv.z, RingElement::one(&ctx));
        let y = sf.split(&RingElement::from_word(&ctx, &Word::gen(0).pow(-1), ratio(1, 2)));
        assert!(matches!(calc.invert_sum(&one, &y, &cutoff), Err(QError::HypothesisViolation(_))));
    }
}
