//! Twisted group rings `(ℚH)Q` for `H = ker(β: G → Q)`.
//!
//! Every `x ∈ ℚG` splits uniquely as `Σ_q x_q s(q)` with `x_q ∈ ℚH`. The
//! twisted product of split elements is defined through the structure
//! functions `ν(q) = conjugation by s(q)` and `μ(q, p) = s(q)s(p)s(qp)⁻¹`
//! and never by reassembling, so the fact that `reassemble` is a ring map is
//! a checkable identity.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::groups::{FiniteQuotient, GroupContext, Word};
use crate::ring::RingElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error("structure function identity fails: {0}")]
    IdentityFailure(String),
}

/// `ν` and `μ` for a quotient with section.
#[derive(Clone)]
pub struct StructureFunctions {
    ctx: GroupContext,
    quot: FiniteQuotient,
    /// Normal forms of `s(q)` and `s(q)⁻¹`.
    s: Vec<Word>,
    s_inv: Vec<Word>,
    mu: Vec<Vec<Word>>,
}

impl fmt::Debug for StructureFunctions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureFunctions(|Q| = {})", self.quot.order())
    }
}

impl StructureFunctions {
    /// Computes `ν, μ` without checking them; see [`StructureFunctions::verify`].
    pub fn compute(ctx: &GroupContext, quot: &FiniteQuotient) -> Self {
        let n = quot.order();
        let s: Vec<Word> = (0..n).map(|q| ctx.nf(quot.section(q).letters())).collect();
        let s_inv: Vec<Word> = s.iter().map(|w| ctx.inv_nf(w)).collect();
        let mu = (0..n)
            .map(|q| (0..n).map(|p| ctx.mul_nf(&ctx.mul_nf(&s[q], &s[p]), &s_inv[quot.mul(q, p)])).collect())
            .collect();
        StructureFunctions { ctx: ctx.clone(), quot: quot.clone(), s, s_inv, mu }
    }

    /// Computes and checks exhaustively over `Q`: `μ` lands in `H`,
    /// `μ(q,1) = μ(1,q) = 1`, `ν(q)∘ν(p) = c(μ(q,p))∘ν(qp)` on Schreier
    /// generators of `H`, and the cocycle identity
    /// `μ(q,p)μ(qp,r) = ν(q)(μ(p,r))μ(q,pr)`.
    pub fn new(ctx: &GroupContext, quot: &FiniteQuotient) -> Result<Self, TwistedError> {
        let sf = Self::compute(ctx, quot);
        sf.verify()?;
        Ok(sf)
    }

    pub fn verify(&self) -> Result<(), TwistedError> {
        let n = self.quot.order();
        let ctx = &self.ctx;
        let fail = |m: String| Err(TwistedError::IdentityFailure(m));
        for q in 0..n {
            if self.quot.image(&self.s[q]) != q {
                return fail(format!("β(s({q})) ≠ {q}"));
            }
        }
        if !self.s[0].is_empty() {
            return fail("s(1) ≠ 1".into());
        }
        for q in 0..n {
            if !self.mu[q][0].is_empty() || !self.mu[0][q].is_empty() {
                return fail(format!("μ({q},1) or μ(1,{q}) ≠ 1"));
            }
            for p in 0..n {
                if self.quot.image(&self.mu[q][p]) != 0 {
                    return fail(format!("μ({q},{p}) ∉ H"));
                }
            }
        }
        let gens = self.kernel_generators();
        for q in 0..n {
            for p in 0..n {
                let qp = self.quot.mul(q, p);
                let mu = &self.mu[q][p];
                for h in &gens {
                    let lhs = self.nu_word(q, &self.nu_word(p, h));
                    let inner = self.nu_word(qp, h);
                    let rhs = ctx.mul_nf(&ctx.mul_nf(mu, &inner), &ctx.inv_nf(mu));
                    if lhs != rhs {
                        return fail(format!("ν({q})∘ν({p}) ≠ c(μ)∘ν({qp}) on {:?}", h));
                    }
                }
                for r in 0..n {
                    let lhs = ctx.mul_nf(mu, &self.mu[qp][r]);
                    let pr = self.quot.mul(p, r);
                    let rhs = ctx.mul_nf(&self.nu_word(q, &self.mu[p][r]), &self.mu[q][pr]);
                    if lhs != rhs {
                        return fail(format!("cocycle identity at ({q},{p},{r})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Schreier generators `s(q) x s(qx)⁻¹`, which generate `H`.
    fn kernel_generators(&self) -> Vec<Word> {
        let n = self.quot.order();
        let mut out = Vec::new();
        for q in 0..n {
            for j in 0..self.ctx.generators() {
                let qx = self.quot.mul(q, self.quot.images()[j]);
                let w = self.s[q].concat(&Word::gen(j)).concat(&self.s_inv[qx]);
                out.push(self.ctx.nf(w.letters()));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.quot
    }

    pub fn section_nf(&self, q: usize) -> &Word {
        &self.s[q]
    }

    pub fn mu(&self, q: usize, p: usize) -> &Word {
        &self.mu[q][p]
    }

    /// `ν(q)(h) = s(q) h s(q)⁻¹`.
    pub fn nu_word(&self, q: usize, h: &Word) -> Word {
        self.ctx.mul_nf(&self.ctx.mul_nf(&self.s[q], h), &self.s_inv[q])
    }

    pub fn nu(&self, q: usize, x: &RingElement) -> RingElement {
        if q == 0 {
            return x.clone();
        }
        x.map_support(&self.ctx, |h| self.nu_word(q, h))
    }

    pub fn split(&self, x: &RingElement) -> CosetSplitElement {
        let mut parts: BTreeMap<usize, RingElement> = BTreeMap::new();
        for (g, c) in x.terms() {
            let (h, q) = self.ctx.coset_decompose(g, &self.quot);
            parts.entry(q).or_insert_with(|| RingElement::zero(&self.ctx)).add_term(h, c.clone());
        }
        parts.retain(|_, v| !v.is_zero());
        CosetSplitElement { parts }
    }

    pub fn reassemble(&self, x: &CosetSplitElement) -> RingElement {
        let mut out = RingElement::zero(&self.ctx);
        for (&q, xq) in &x.parts {
            out = &out + &xq.right_translate(&self.s[q]);
        }
        out
    }

    /// `x_q q · y_p p = x_q ν(q)(y_p) μ(q,p) (qp)`.
    pub fn twisted_mul(&self, x: &CosetSplitElement, y: &CosetSplitElement) -> CosetSplitElement {
        let mut parts: BTreeMap<usize, RingElement> = BTreeMap::new();
        for (&q, xq) in &x.parts {
            for (&p, yp) in &y.parts {
                let term = (xq * &self.nu(q, yp)).right_translate(&self.mu[q][p]);
                let qp = self.quot.mul(q, p);
                let slot = parts.entry(qp).or_insert_with(|| RingElement::zero(&self.ctx));
                *slot = &*slot + &term;
            }
        }
        parts.retain(|_, v| !v.is_zero());
        CosetSplitElement { parts }
    }

    pub fn twisted_add(&self, x: &CosetSplitElement, y: &CosetSplitElement) -> CosetSplitElement {
        let mut parts = x.parts.clone();
        for (&p, yp) in &y.parts {
            let slot = parts.entry(p).or_insert_with(|| RingElement::zero(&self.ctx));
            *slot = &*slot + yp;
        }
        parts.retain(|_, v| !v.is_zero());
        CosetSplitElement { parts }
    }

    /// The element `1 · q` of `(ℚH)Q`.
    pub fn basis(&self, q: usize) -> CosetSplitElement {
        CosetSplitElement::single(q, RingElement::one(&self.ctx))
    }
}

/// `Σ_q x_q q` with every `x_q ∈ ℚH` stored as a `ℚG` element.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CosetSplitElement {
    parts: BTreeMap<usize, RingElement>,
}

impl CosetSplitElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(q: usize, x: RingElement) -> Self {
        let mut parts = BTreeMap::new();
        if !x.is_zero() {
            parts.insert(q, x);
        }
        CosetSplitElement { parts }
    }

    pub fn parts(&self) -> &BTreeMap<usize, RingElement> {
        &self.parts
    }

    pub fn part(&self, q: usize) -> Option<&RingElement> {
        self.parts.get(&q)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}
