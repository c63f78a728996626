//! Fox calculus and the presentation chain complex `C₂ → C₁ → C₀`.
//!
//! Chains are row vectors over `ℚG` acted on from the left, so a
//! differential is right multiplication by its matrix: `d1` is the column
//! `x_j - 1` and row `i` of `d2` holds `∂r_i/∂x_j`.

use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use crate::characters::Character;
use crate::groups::{GroupContext, Word};
use crate::novikov::{NovikovElement, NovikovError, NovikovRing};
use crate::ring::RingElement;
use crate::value::{rat, Valuation, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("d1∘d2 ≠ 0 on relator {0}")]
    IdentityFailure(usize),
    #[error("character vanishes on every generator")]
    ZeroCharacter,
    #[error("cycle check failed for generator {0}")]
    NotACycle(usize),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

/// Left Fox derivative `∂w/∂x_j`.
pub fn fox_derivative(ctx: &GroupContext, w: &Word, j: usize) -> RingElement {
    let mut out = RingElement::zero(ctx);
    let mut prefix = Word::empty();
    for &l in w.letters() {
        let next = ctx.mul_nf(&prefix, &Word(vec![l]));
        if l.gen() == j {
            if l.is_inverse() {
                out.add_term(next.clone(), rat(-1));
            } else {
                out.add_term(prefix.clone(), rat(1));
            }
        }
        prefix = next;
    }
    out
}

/// `Σ_j ∂w/∂x_j (x_j - 1)`, which equals `w - 1`.
pub fn fox_expansion(ctx: &GroupContext, w: &Word) -> RingElement {
    let mut out = RingElement::zero(ctx);
    for j in 0..ctx.generators() {
        let d = fox_derivative(ctx, w, j);
        if !d.is_zero() {
            out = &out + &(&d * &generator_minus_one(ctx, j));
        }
    }
    out
}

fn generator_minus_one(ctx: &GroupContext, j: usize) -> RingElement {
    &RingElement::from_word(ctx, &Word::gen(j), rat(1)) - &RingElement::one(ctx)
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    ctx: GroupContext,
    d2: Vec<Vec<RingElement>>,
    d1: Vec<RingElement>,
}

impl ChainComplex {
    /// Fox Jacobian of the relators; checks `d1∘d2 = 0`.
    pub fn build(ctx: &GroupContext) -> Result<Self, ChainError> {
        let n = ctx.generators();
        let d1: Vec<RingElement> = (0..n).map(|j| generator_minus_one(ctx, j)).collect();
        let d2: Vec<Vec<RingElement>> = ctx
            .presentation()
            .relators
            .iter()
            .map(|r| (0..n).map(|j| fox_derivative(ctx, r, j)).collect())
            .collect();
        let cc = ChainComplex { ctx: ctx.clone(), d2, d1 };
        cc.check()?;
        Ok(cc)
    }

    pub fn check(&self) -> Result<(), ChainError> {
        for (i, row) in self.d2.iter().enumerate() {
            let mut sum = RingElement::zero(&self.ctx);
            for (x, y) in row.iter().zip(&self.d1) {
                sum = &sum + &(x * y);
            }
            if !sum.is_zero() {
                return Err(ChainError::IdentityFailure(i));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn d2(&self) -> &[Vec<RingElement>] {
        &self.d2
    }

    pub fn d1(&self) -> &[RingElement] {
        &self.d1
    }

    pub fn relators(&self) -> usize {
        self.d2.len()
    }

    pub fn generators(&self) -> usize {
        self.d1.len()
    }

    /// `d2` with column `s` removed: the coordinates of the relator
    /// boundaries in the cycle basis pivoted at `s`.
    pub fn reduced_jacobian(&self, s: usize) -> Vec<Vec<RingElement>> {
        self.d2
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != s).map(|(_, x)| x.clone()).collect())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d2: Vec<Vec<_>> = self.d2.iter().map(|row| row.iter().map(RingElement::to_json).collect()).collect();
        json!({
            "schema": 1,
            "generators": self.ctx.names(),
            "d2": { "rows": self.relators(), "cols": self.generators(), "entries": d2 },
            "d1": { "rows": self.generators(), "cols": 1, "entries": self.d1.iter().map(RingElement::to_json).collect::<Vec<_>>() },
        })
    }
}

/// The generator of largest `|φ|`, first on ties.
pub fn pivot_generator(ctx: &GroupContext, phi: &Character) -> Result<usize, ChainError> {
    let values = phi.generator_values(ctx);
    let mut best: Option<(usize, Value)> = None;
    for (j, v) in values.into_iter().enumerate() {
        let a = v.abs();
        if a.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| &a > b) {
            best = Some((j, a));
        }
    }
    best.map(|(j, _)| j).ok_or(ChainError::ZeroCharacter)
}

/// Novikov 1-cycles `e_t' = e_t - (t-1)(s-1)⁻¹ e_s`, one per `t ≠ s`.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub pivot: usize,
    /// `φ(s) > 0`; otherwise the pivot edge is traversed backwards, which
    /// only changes the series for `(s-1)⁻¹`.
    pub pivot_positive: bool,
    /// `(t, coordinates in C₁)`.
    pub basis: Vec<(usize, Vec<NovikovElement>)>,
}

pub fn cycle_basis(cc: &ChainComplex, phi: &Character, cutoff: &Valuation) -> Result<CycleBasis, ChainError> {
    let ctx = cc.context();
    let ring: Arc<NovikovRing> = NovikovRing::new(ctx, phi)?;
    let s = pivot_generator(ctx, phi)?;
    let pivot_positive = phi.evaluate(ctx, &Word::gen(s)).is_positive();
    let inv = ring.exact(cc.d1[s].clone()).invert(cutoff)?;
    let n = cc.generators();
    let mut basis = Vec::new();
    for t in (0..n).filter(|&t| t != s) {
        let coeff = ring.exact(cc.d1[t].clone()).mul(&inv)?.neg();
        let row: Vec<NovikovElement> = (0..n)
            .map(|j| match j {
                _ if j == t => ring.one(),
                _ if j == s => coeff.clone(),
                _ => ring.zero(),
            })
            .collect();
        let mut boundary = ring.zero();
        for (x, d) in row.iter().zip(&cc.d1) {
            boundary = boundary.add(&x.mul(&ring.exact(d.clone()))?)?;
        }
        if !boundary.is_zero() {
            return Err(ChainError::NotACycle(t));
        }
        basis.push((t, row));
    }
    Ok(CycleBasis { pivot: s, pivot_positive, basis })
}
