//! Truncated Novikov rings.
//!
//! A [`NovikovElement`] is a finite body together with a cutoff `c`: it
//! stands for every Novikov series that agrees with the body on all terms of
//! `φ`-value `< c`. Every operation propagates cutoffs so that the result is
//! correct for all representatives.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::characters::{Character, CompatibleOrder};
use crate::groups::{GroupContext, Word};
use crate::ring::RingElement;
use crate::value::{Rational, Valuation, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NovikovError {
    #[error("elements over different characters")]
    CharacterMismatch,
    #[error("character rank {found} does not match abelianization rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("no strict gap below the leading term of {0}")]
    StrictGapViolation(String),
    #[error("cannot invert zero")]
    ZeroElement,
    #[error("an infinite series needs a finite cutoff")]
    InfiniteSeries,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not of the form I - M with φ(M) > 0")]
    PositivityViolation,
    #[error("elimination found no certifiable pivot at cutoff {0}")]
    InconclusiveAtCutoff(String),
    #[error("post-condition failed: {0}")]
    VerificationFailed(String),
}

/// The ring `Nov(G, φ)` truncated at cutoffs; shared by its elements.
pub struct NovikovRing {
    ctx: GroupContext,
    phi: Character,
    order: CompatibleOrder,
}

impl fmt::Debug for NovikovRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nov({:?}, φ = {})", self.ctx, self.phi)
    }
}

impl NovikovRing {
    pub fn new(ctx: &GroupContext, phi: &Character) -> Result<Arc<Self>, NovikovError> {
        let expected = ctx.abelianization().rank;
        if phi.rank() != expected {
            return Err(NovikovError::RankMismatch { expected, found: phi.rank() });
        }
        Ok(Arc::new(NovikovRing { ctx: ctx.clone(), phi: phi.clone(), order: CompatibleOrder::new(phi.clone()) }))
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn character(&self) -> &Character {
        &self.phi
    }

    pub fn order(&self) -> &CompatibleOrder {
        &self.order
    }

    pub fn value(&self, g: &Word) -> Value {
        self.phi.evaluate(&self.ctx, g)
    }

    /// `8 · max |φ(x)|` over generators with `φ(x) ≠ 0`.
    pub fn default_cutoff(&self) -> Value {
        let max = self
            .phi
            .generator_values(&self.ctx)
            .iter()
            .map(Value::abs)
            .max()
            .unwrap_or_else(Value::zero);
        max.scale_int(8)
    }

    pub fn element(self: &Arc<Self>, body: RingElement, cutoff: Valuation) -> NovikovElement {
        assert!(body.context().same(&self.ctx), "element from another context");
        let body = body.truncate(&self.phi, &cutoff);
        NovikovElement { ring: self.clone(), body, cutoff }
    }

    pub fn exact(self: &Arc<Self>, body: RingElement) -> NovikovElement {
        self.element(body, Valuation::Infinite)
    }

    pub fn zero(self: &Arc<Self>) -> NovikovElement {
        self.exact(RingElement::zero(&self.ctx))
    }

    pub fn one(self: &Arc<Self>) -> NovikovElement {
        self.exact(RingElement::one(&self.ctx))
    }

    /// Product of bodies keeping only terms of value `< cut`.
    pub fn mul_truncated(&self, x: &RingElement, y: &RingElement, cut: &Valuation) -> RingElement {
        let mut ys: Vec<(&Word, &Rational, Value)> = y.terms().map(|(h, b)| (h, b, self.value(h))).collect();
        ys.sort_by(|a, b| a.2.cmp(&b.2));
        let mut out = RingElement::zero(&self.ctx);
        for (g, a) in x.terms() {
            // φ(gh) < cut iff φ(h) < cut - φ(g)
            let room = match cut {
                Valuation::Finite(c) => Some(c - &self.value(g)),
                Valuation::Infinite => None,
            };
            for (h, b, vh) in &ys {
                if room.as_ref().is_some_and(|r| vh >= r) {
                    break;
                }
                out.add_term(self.ctx.mul_nf(g, h), crate::ring::coeff_mul(a, b));
            }
        }
        out
    }
}

#[derive(Clone)]
pub struct NovikovElement {
    ring: Arc<NovikovRing>,
    body: RingElement,
    cutoff: Valuation,
}

impl fmt::Debug for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod φ ≥ {})", self.body, self.cutoff)
    }
}

impl NovikovElement {
    pub fn ring(&self) -> &Arc<NovikovRing> {
        &self.ring
    }

    pub fn body(&self) -> &RingElement {
        &self.body
    }

    pub fn cutoff(&self) -> &Valuation {
        &self.cutoff
    }

    /// Zero modulo the cutoff.
    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// `φ` of the body; a lower bound on every representative only where
    /// it is below the cutoff.
    pub fn valuation(&self) -> Valuation {
        self.body.valuation(&self.ring.phi)
    }

    pub fn with_cutoff(&self, cutoff: &Valuation) -> NovikovElement {
        let c = (&self.cutoff).min(cutoff).clone();
        self.ring.element(self.body.clone(), c)
    }

    fn check(&self, other: &NovikovElement) -> Result<(), NovikovError> {
        if Arc::ptr_eq(&self.ring, &other.ring)
            || (self.ring.ctx.same(&other.ring.ctx) && self.ring.phi == other.ring.phi)
        {
            Ok(())
        } else {
            Err(NovikovError::CharacterMismatch)
        }
    }

    pub fn add(&self, other: &NovikovElement) -> Result<NovikovElement, NovikovError> {
        self.check(other)?;
        let c = (&self.cutoff).min(&other.cutoff).clone();
        Ok(self.ring.element(&self.body + &other.body, c))
    }

    pub fn sub(&self, other: &NovikovElement) -> Result<NovikovElement, NovikovError> {
        self.check(other)?;
        let c = (&self.cutoff).min(&other.cutoff).clone();
        Ok(self.ring.element(&self.body - &other.body, c))
    }

    pub fn neg(&self) -> NovikovElement {
        NovikovElement { ring: self.ring.clone(), body: -&self.body, cutoff: self.cutoff.clone() }
    }

    /// Cutoff `min(c_x + φ(y), c_y + φ(x), c_x + c_y)`.
    pub fn mul(&self, other: &NovikovElement) -> Result<NovikovElement, NovikovError> {
        self.check(other)?;
        // lower bounds valid for every representative
        let vx = self.valuation().min(self.cutoff.clone());
        let vy = other.valuation().min(other.cutoff.clone());
        let c = [&self.cutoff + &vy, &other.cutoff + &vx, &self.cutoff + &other.cutoff]
            .into_iter()
            .min()
            .expect("three candidates");
        let body = self.ring.mul_truncated(&self.body, &other.body, &c);
        Ok(NovikovElement { ring: self.ring.clone(), body, cutoff: c })
    }

    /// Leading monomial `λg` when every other term has strictly larger
    /// `φ`-value.
    pub fn strict_leading_term(&self) -> Result<(Word, Rational, Value), NovikovError> {
        let (g, lambda) = self.body.leading_term(&self.ring.order).ok_or(NovikovError::ZeroElement)?;
        let v0 = self.ring.value(&g);
        for h in self.body.support() {
            if h != &g && self.ring.value(h) <= v0 {
                return Err(NovikovError::StrictGapViolation(self.body.to_string()));
            }
        }
        // the body is only known below the cutoff
        if Valuation::Finite(v0.clone()) >= self.cutoff {
            return Err(NovikovError::ZeroElement);
        }
        Ok((g, lambda, v0))
    }

    /// `x⁻¹ = Σ yⁱ (λg)⁻¹` for `x = λg(1 - y)`; the result is correct
    /// modulo `min(target, c_x - 2φ(x))` and is checked two-sidedly.
    pub fn invert(&self, target: &Valuation) -> Result<NovikovElement, NovikovError> {
        let (g, lambda, v0) = self.strict_leading_term()?;
        let ring = &self.ring;
        let ctx = &ring.ctx;
        let m = RingElement::monomial(ctx, ctx.inv_nf(&g), lambda.recip());
        let y = &RingElement::one(ctx) - &(&m * &self.body);
        let limit = self.cutoff.add_value(&(-v0.scale_int(2)));
        let cut = target.min(&limit).clone();
        if y.is_zero() && self.cutoff.is_infinite() {
            return Ok(ring.exact(m));
        }
        let Valuation::Finite(_) = cut else { return Err(NovikovError::InfiniteSeries) };
        let mut z = m.truncate(&ring.phi, &cut);
        let mut term = z.clone();
        while !term.is_zero() {
            term = ring.mul_truncated(&y, &term, &cut);
            z = &z + &term;
        }
        let inv = ring.element(z, cut);
        for (a, b, side) in [(self, &inv, "x·x⁻¹"), (&inv, self, "x⁻¹·x")] {
            let p = a.mul(b)?;
            if !p.sub(&ring.one())?.is_zero() {
                return Err(NovikovError::VerificationFailed(format!("{side} ≠ 1")));
            }
        }
        Ok(inv)
    }
}

impl PartialEq for NovikovElement {
    /// Equal bodies and cutoffs.
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body && self.cutoff == other.cutoff
    }
}

/// Dense matrix of Novikov elements over one ring.
#[derive(Clone, Debug)]
pub struct NovikovMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NovikovElement>,
}

impl NovikovMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NovikovElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        NovikovMatrix { rows, cols, entries }
    }

    pub fn zeros(ring: &Arc<NovikovRing>, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &Arc<NovikovRing>, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn from_ring_matrix(ring: &Arc<NovikovRing>, m: &[Vec<RingElement>], cols: usize, cutoff: &Valuation) -> Self {
        Self::from_fn(m.len(), cols, |i, j| ring.element(m[i][j].clone(), cutoff.clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NovikovElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: NovikovElement) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[NovikovElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// The smallest entry cutoff.
    pub fn cutoff(&self) -> Valuation {
        self.entries.iter().map(|e| e.cutoff.clone()).min().unwrap_or(Valuation::Infinite)
    }

    pub fn with_cutoff(&self, c: &Valuation) -> Self {
        NovikovMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e.with_cutoff(c)).collect() }
    }

    pub fn mul(&self, other: &NovikovMatrix) -> Result<NovikovMatrix, NovikovError> {
        if self.cols != other.rows {
            return Err(NovikovError::Shape(format!("{}×{} · {}×{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let ring = self.entries.first().or(other.entries.first()).map(|e| e.ring.clone());
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = match &ring {
                    Some(r) => r.zero(),
                    None => unreachable!("non-empty product"),
                };
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(NovikovMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn sub(&self, other: &NovikovMatrix) -> Result<NovikovMatrix, NovikovError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(NovikovError::Shape("difference of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect::<Result<_, _>>()?;
        Ok(NovikovMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, other: &NovikovMatrix) -> Result<NovikovMatrix, NovikovError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(NovikovError::Shape("sum of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(NovikovMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NovikovElement::is_zero)
    }

    /// Equal to the identity modulo entry cutoffs.
    pub fn is_identity(&self) -> Result<bool, NovikovError> {
        if self.rows != self.cols {
            return Ok(false);
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let d = if i == j { e.sub(&e.ring.one())? } else { e.clone() };
                if !d.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `(I - M)⁻¹ = Σ Mⁱ` for `M = I - self` with every entry of positive
    /// value; verified on both sides.
    pub fn invert(&self, target: &Valuation) -> Result<NovikovMatrix, NovikovError> {
        if self.rows != self.cols {
            return Err(NovikovError::Shape(format!("{}×{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let ring = self.entries[0].ring.clone();
        let id = NovikovMatrix::identity(&ring, n);
        let m = id.sub(self)?;
        for e in &m.entries {
            if let Valuation::Finite(v) = e.valuation() {
                if !v.is_positive() {
                    return Err(NovikovError::PositivityViolation);
                }
            }
        }
        let cut = target.min(&self.cutoff()).clone();
        if m.is_zero() && cut.is_infinite() {
            return Ok(id);
        }
        if cut.is_infinite() {
            return Err(NovikovError::InfiniteSeries);
        }
        let m = m.with_cutoff(&cut);
        let mut sum = id.with_cutoff(&cut);
        let mut power = sum.clone();
        loop {
            power = m.mul(&power)?.with_cutoff(&cut);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        if !self.mul(&sum)?.is_identity()? || !sum.mul(self)?.is_identity()? {
            return Err(NovikovError::VerificationFailed("matrix inverse".into()));
        }
        Ok(sum)
    }

    /// Valuation-greedy Gauss–Jordan elimination by row operations.
    ///
    /// A pivot must have a strict leading monomial. Among candidates the
    /// one of least value wins, then the least leading monomial in the
    /// compatible order, then the first in row-major order.
    pub fn eliminate(&self, target: &Valuation) -> Result<Elimination, NovikovError> {
        let (rows, cols) = (self.rows, self.cols);
        let Some(first) = self.entries.first() else {
            return Ok(Elimination { rank: 0, pivots: Vec::new(), l: NovikovMatrix::from_fn(rows, rows, |_, _| unreachable!()), r: NovikovMatrix::from_fn(cols, cols, |_, _| unreachable!()) });
        };
        let ring = first.ring.clone();
        let mut a = self.clone();
        let mut l = NovikovMatrix::identity(&ring, rows);
        let mut row_used = vec![false; rows];
        let mut col_used = vec![false; cols];
        let mut pivots = Vec::new();
        loop {
            let mut best: Option<(usize, usize, Value, Vec<i64>)> = None;
            let mut nonzero = false;
            for i in (0..rows).filter(|&i| !row_used[i]) {
                for j in (0..cols).filter(|&j| !col_used[j]) {
                    let e = a.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    nonzero = true;
                    let Ok((g, _, v)) = e.strict_leading_term() else { continue };
                    let coords = ring.ctx.abelian_coords(&g);
                    let better = match &best {
                        None => true,
                        Some((_, _, bv, bc)) => v.cmp(bv).then_with(|| ring.order.compare_coords(&coords, bc)) == Ordering::Less,
                    };
                    if better {
                        best = Some((i, j, v, coords));
                    }
                }
            }
            let Some((pi, pj, _, _)) = best else {
                if nonzero {
                    return Err(NovikovError::InconclusiveAtCutoff(a.cutoff().to_string()));
                }
                break;
            };
            let u = a.get(pi, pj).invert(target)?;
            for j in 0..cols {
                let x = u.mul(a.get(pi, j))?;
                a.set(pi, j, x);
            }
            for j in 0..rows {
                let x = u.mul(l.get(pi, j))?;
                l.set(pi, j, x);
            }
            for k in (0..rows).filter(|&k| k != pi) {
                let f = a.get(k, pj).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let x = a.get(k, j).sub(&f.mul(a.get(pi, j))?)?;
                    a.set(k, j, x);
                }
                for j in 0..rows {
                    let x = l.get(k, j).sub(&f.mul(l.get(pi, j))?)?;
                    l.set(k, j, x);
                }
            }
            row_used[pi] = true;
            col_used[pj] = true;
            pivots.push((pi, pj));
        }
        // pivot rows and columns first, in pivot order
        let row_perm: Vec<usize> =
            pivots.iter().map(|p| p.0).chain((0..rows).filter(|&i| !row_used[i])).collect();
        let col_perm: Vec<usize> =
            pivots.iter().map(|p| p.1).chain((0..cols).filter(|&j| !col_used[j])).collect();
        let l = NovikovMatrix::from_fn(rows, rows, |i, j| l.get(row_perm[i], j).clone());
        let r = NovikovMatrix::from_fn(cols, cols, |i, j| if col_perm[j] == i { ring.one() } else { ring.zero() });
        Ok(Elimination { rank: pivots.len(), pivots, l, r })
    }
}

/// `L·m·R = [I 0; 0 0]` modulo cutoff.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// `(row, column)` of each pivot in the original matrix.
    pub pivots: Vec<(usize, usize)>,
    pub l: NovikovMatrix,
    /// Column permutation.
    pub r: NovikovMatrix,
}

impl Elimination {
    /// Recomputes `L·m·R` and compares with the claimed block form.
    pub fn verify(&self, m: &NovikovMatrix) -> Result<bool, NovikovError> {
        if m.rows() == 0 || m.cols() == 0 {
            return Ok(self.rank == 0);
        }
        let d = self.l.mul(m)?.mul(&self.r)?;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let e = d.get(i, j);
                let e = if i == j && i < self.rank { e.sub(&e.ring.one())? } else { e.clone() };
                if !e.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `Σ_{i<n} yⁱ`.
pub fn geometric_sum(y: &RingElement, n: usize) -> RingElement {
    let ctx = y.context();
    let mut sum = RingElement::zero(ctx);
    let mut p = RingElement::one(ctx);
    for _ in 0..n {
        sum = &sum + &p;
        p = &p * y;
    }
    sum
}

pub fn rational_one() -> Rational {
    Rational::one()
}

pub fn is_rational_zero(q: &Rational) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;
    use proptest::prelude::*;

    fn z() -> (GroupContext, Arc<NovikovRing>) {
        let ctx = GroupContext::parse("raag { t; }").unwrap();
        let ring = NovikovRing::new(&ctx, &Character::integral(&[1])).unwrap();
        (ctx, ring)
    }

    fn poly(ctx: &GroupContext, coeffs: &[(i64, i64)]) -> RingElement {
        RingElement::from_terms(ctx, coeffs.iter().map(|&(e, c)| (Word::gen(0).pow(e), rat(c))))
    }

    fn fin(n: i64) -> Valuation {
        Valuation::Finite(Value::int(n))
    }

    #[test]
    fn telescoping_product() {
        let (ctx, ring) = z();
        let x = ring.element(poly(&ctx, &[(0, 1), (1, -1)]), fin(5));
        let y = ring.element(poly(&ctx, &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]), fin(5));
        let p = x.mul(&y).unwrap();
        assert_eq!(p.cutoff(), &fin(5));
        assert_eq!(p.body(), &RingElement::one(&ctx));
        let sum = x.add(&ring.zero()).unwrap();
        assert_eq!(sum, x);
    }

    #[test]
    fn scalar_inverses() {
        let (ctx, ring) = z();
        let three_t = ring.exact(poly(&ctx, &[(1, 3)]));
        let inv = three_t.invert(&fin(5)).unwrap();
        assert_eq!(inv.cutoff(), &Valuation::Infinite);
        assert_eq!(inv.body(), &RingElement::from_word(&ctx, &Word::gen(0).pow(-1), crate::value::ratio(1, 3)));

        let one_minus_t = ring.exact(poly(&ctx, &[(0, 1), (1, -1)]));
        let inv = one_minus_t.invert(&fin(5)).unwrap();
        assert_eq!(inv.body(), &poly(&ctx, &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]));
        let one_plus_t = ring.exact(poly(&ctx, &[(0, 1), (1, 1)]));
        let inv = one_plus_t.invert(&fin(5)).unwrap();
        assert_eq!(inv.body(), &poly(&ctx, &[(0, 1), (1, -1), (2, 1), (3, -1), (4, 1)]));
    }

    #[test]
    fn strict_gap_is_required() {
        let ctx = GroupContext::parse("raag { a, t; a-t }").unwrap();
        let ring = NovikovRing::new(&ctx, &Character::integral(&[0, 1])).unwrap();
        // 1 + a has two terms of value 0
        let x = ring.exact(RingElement::from_terms(&ctx, [(Word::empty(), rat(1)), (Word::gen(0), rat(1))]));
        assert!(matches!(x.invert(&fin(4)), Err(NovikovError::StrictGapViolation(_))));
        assert!(matches!(ring.zero().invert(&fin(4)), Err(NovikovError::ZeroElement)));
    }

    #[test]
    fn matrix_inverses() {
        let (ctx, ring) = z();
        let id = NovikovMatrix::identity(&ring, 2);
        assert!(id.invert(&fin(3)).unwrap().is_identity().unwrap());
        let m = NovikovMatrix::from_fn(1, 1, |_, _| ring.exact(poly(&ctx, &[(0, 1), (1, -1)])));
        let inv = m.invert(&fin(3)).unwrap();
        assert_eq!(inv.get(0, 0).body(), &poly(&ctx, &[(0, 1), (1, 1), (2, 1)]));
        // I - [[0, t], [t, 0]]
        let m = NovikovMatrix::from_fn(2, 2, |i, j| {
            if i == j { ring.one() } else { ring.exact(poly(&ctx, &[(1, -1)])) }
        });
        let inv = m.invert(&fin(6)).unwrap();
        assert_eq!(inv.get(0, 0).body(), &poly(&ctx, &[(0, 1), (2, 1), (4, 1)]));
        assert_eq!(inv.get(0, 1).body(), &poly(&ctx, &[(1, 1), (3, 1), (5, 1)]));
        let bad = NovikovMatrix::from_fn(1, 1, |_, _| ring.exact(poly(&ctx, &[(0, 1), (-1, 1)])));
        assert_eq!(bad.invert(&fin(3)).unwrap_err(), NovikovError::PositivityViolation);
    }

    #[test]
    fn elimination_examples() {
        let (ctx, ring) = z();
        let zero = NovikovMatrix::zeros(&ring, 2, 2);
        let e = zero.eliminate(&fin(4)).unwrap();
        assert_eq!(e.rank, 0);
        assert!(e.l.is_identity().unwrap() && e.r.is_identity().unwrap());
        let d = NovikovMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => ring.exact(poly(&ctx, &[(1, 1)])),
            (1, 1) => ring.one(),
            _ => ring.zero(),
        });
        let e = d.eliminate(&fin(4)).unwrap();
        assert_eq!(e.rank, 2);
        assert!(e.verify(&d).unwrap());
        // a 3×2 matrix over ℤ with series pivots
        let m = NovikovMatrix::from_fn(3, 2, |i, j| ring.element(poly(&ctx, &[(0, (i + 2 * j) as i64 % 3 - 1), (1, 1)]), fin(8)));
        let e = m.eliminate(&fin(8)).unwrap();
        assert!(e.verify(&m).unwrap());
    }

    proptest! {
        #[test]
        fn cutoff_soundness(a in prop::collection::vec(-3i64..=3, 4), b in prop::collection::vec(-3i64..=3, 4)) {
            let (ctx, ring) = z();
            let pa: Vec<(i64, i64)> = a.iter().enumerate().map(|(i, &c)| (i as i64, c)).collect();
            let pb: Vec<(i64, i64)> = b.iter().enumerate().map(|(i, &c)| (i as i64 - 1, c)).collect();
            let lo = ring.element(poly(&ctx, &pa), fin(4)).mul(&ring.element(poly(&ctx, &pb), fin(3))).unwrap();
            let hi = ring.element(poly(&ctx, &pa), fin(9)).mul(&ring.element(poly(&ctx, &pb), fin(9))).unwrap();
            let hi = hi.with_cutoff(lo.cutoff());
            prop_assert_eq!(hi.body(), lo.body());
        }

        #[test]
        fn geometric_partial_sums(k in 1usize..6, c in -2i64..=2) {
            let (ctx, ring) = z();
            let y = poly(&ctx, &[(1, 1), (2, c)]);
            let s = geometric_sum(&y, k);
            let lhs = &(&RingElement::one(&ctx) - &y) * &s;
            let mut yk = RingElement::one(&ctx);
            for _ in 0..k { yk = &yk * &y; }
            prop_assert_eq!(lhs, &RingElement::one(&ctx) - &yk);
            prop_assert!(yk.valuation(ring.character()) >= Valuation::Finite(Value::int(k as i64)));
        }
    }
}
