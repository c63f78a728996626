use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::abelian::{free_abelianization, Abelianization};
use super::presentation::{GroupPresentation, NormalFormEngine};
use super::quotient::FiniteQuotient;
use super::rewriting::DEFAULT_STEP_BUDGET;
use super::subgroup::SubgroupEngine;
use super::word::{Letter, Word};
use super::GroupError;

struct Inner {
    presentation: GroupPresentation,
    abelianization: Abelianization,
    budget: usize,
}

/// Shared handle to a presentation with a working normal form.
///
/// Clones are cheap. Two handles are the same context iff they come from the
/// same [`GroupContext::new`] call.
#[derive(Clone)]
pub struct GroupContext(Arc<Inner>);

impl fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupContext({})", self.0.presentation.generators.join(","))
    }
}

impl GroupContext {
    /// Builds the context and checks that every relator normalizes to the
    /// identity (always true for RAAGs).
    pub fn new(presentation: GroupPresentation) -> Result<Self, GroupError> {
        let abelianization = free_abelianization(presentation.rank(), &presentation.relators);
        let ctx = GroupContext(Arc::new(Inner { presentation, abelianization, budget: DEFAULT_STEP_BUDGET }));
        if !matches!(ctx.presentation().engine, NormalFormEngine::Raag(_)) {
            for (i, r) in ctx.presentation().relators.iter().enumerate() {
                if !ctx.normalize(r.letters())?.is_empty() {
                    return Err(GroupError::RelatorNotTrivial(i));
                }
            }
        }
        Ok(ctx)
    }

    pub fn parse(src: &str) -> Result<Self, GroupError> {
        Self::new(super::parse_presentation(src)?)
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.0.presentation
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.0.abelianization
    }

    pub fn generators(&self) -> usize {
        self.0.presentation.rank()
    }

    pub fn names(&self) -> &[String] {
        &self.0.presentation.generators
    }

    pub fn same(&self, other: &GroupContext) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn subgroup_engine(&self) -> Option<&SubgroupEngine> {
        match &self.0.presentation.engine {
            NormalFormEngine::Subgroup(s) => Some(s),
            _ => None,
        }
    }

    /// Biorderable contexts (RAAGs) have group rings without zero divisors.
    pub fn is_biorderable(&self) -> bool {
        matches!(self.0.presentation.engine, NormalFormEngine::Raag(_))
    }

    pub fn normalize(&self, letters: &[Letter]) -> Result<Word, GroupError> {
        let n = self.generators();
        if let Some(l) = letters.iter().find(|l| l.gen() >= n) {
            return Err(GroupError::BadGenerator(l.gen()));
        }
        match &self.0.presentation.engine {
            NormalFormEngine::Raag(r) => Ok(r.normalize(letters)),
            NormalFormEngine::Rewriting(s) => s.normalize(letters, self.0.budget),
            NormalFormEngine::Affine(e) => Ok(e.normalize(letters)),
            NormalFormEngine::Subgroup(s) => s.normalize(letters),
        }
    }

    /// # Panics
    /// If the rewriting step budget is exhausted; contexts are validated at
    /// construction so this signals a pathologically long word.
    pub fn nf(&self, letters: &[Letter]) -> Word {
        self.normalize(letters).unwrap_or_else(|e| panic!("normal form failed: {e}"))
    }

    pub fn normal_form(&self, w: &Word) -> Result<GroupElement, GroupError> {
        Ok(GroupElement { ctx: self.clone(), word: self.normalize(w.letters())? })
    }

    pub fn element(&self, w: &Word) -> GroupElement {
        GroupElement { ctx: self.clone(), word: self.nf(w.letters()) }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { ctx: self.clone(), word: Word::empty() }
    }

    pub fn generator(&self, g: usize) -> GroupElement {
        self.element(&Word::gen(g))
    }

    /// Product of two normal forms.
    pub fn mul_nf(&self, u: &Word, v: &Word) -> Word {
        let mut letters = Vec::with_capacity(u.len() + v.len());
        letters.extend_from_slice(u.letters());
        letters.extend_from_slice(v.letters());
        self.nf(&letters)
    }

    pub fn inv_nf(&self, u: &Word) -> Word {
        self.nf(u.inverse().letters())
    }

    pub fn abelian_coords(&self, w: &Word) -> Vec<i64> {
        self.abelianization().project(&w.exponent_vector(self.generators()))
    }

    /// `g = h · s(cls)` with `β(h) = 1`.
    pub fn coset_decompose(&self, g: &Word, q: &FiniteQuotient) -> (Word, usize) {
        let cls = q.image(g);
        let h = self.mul_nf(g, &q.section(cls).inverse());
        (h, cls)
    }
}

/// A normal form together with its context.
#[derive(Clone)]
pub struct GroupElement {
    ctx: GroupContext,
    word: Word,
}

impl GroupElement {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement { ctx: self.ctx.clone(), word: self.ctx.mul_nf(&self.word, &other.word) }
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement { ctx: self.ctx.clone(), word: self.ctx.inv_nf(&self.word) }
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        self.ctx.element(&self.word.pow(n))
    }

    pub fn abelian_coords(&self) -> Vec<i64> {
        self.ctx.abelian_coords(&self.word)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word.display(self.ctx.names()))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word.display(self.ctx.names()))
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for GroupElement {}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.cmp(&other.word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::quotient::FiniteGroup;
    use proptest::prelude::*;

    fn words(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..n, any::<bool>()), 0..=max_len)
            .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
    }

    fn catalog() -> Vec<GroupContext> {
        [
            "raag { a, b, z; a-z, b-z }",
            "raag { a, b, c, d; a-b, b-c, c-d, d-a }",
            "pres { a, t | t a t^-1 a^-2 } rewriting(recursive) { a a t -> t a; a t^-1 -> t^-1 a a; a^-1 t -> a t a^-1; a^-1 t^-1 -> t^-1 a^-1 a^-1 }",
            "pres { a, b | a^2, b^2 } rewriting { a a -> 1; b b -> 1; a^-1 -> a; b^-1 -> b }",
        ]
        .iter()
        .map(|s| GroupContext::parse(s).unwrap())
        .collect()
    }

    #[test]
    fn z_coset_example() {
        let ctx = GroupContext::parse("raag { t; }").unwrap();
        let q = FiniteQuotient::new(ctx.presentation(), FiniteGroup::cyclic(2), vec![1], None).unwrap();
        let (h, cls) = ctx.coset_decompose(&Word::gen(0).pow(3), &q);
        assert_eq!((h, cls), (Word::gen(0).pow(2), 1));
        assert_eq!(ctx.coset_decompose(&Word::empty(), &q), (Word::empty(), 0));
    }

    #[test]
    fn rewriting_relators_are_checked() {
        let r = GroupContext::parse("pres { a, b | a b } rewriting { }");
        assert!(matches!(r, Err(GroupError::RelatorNotTrivial(0))));
    }

    proptest! {
        #[test]
        fn nf_idempotent_and_multiplicative(u in words(4, 6), v in words(4, 6), which in 0usize..4) {
            let ctx = &catalog()[which];
            let n = ctx.generators();
            let clamp = |w: &Word| -> Word { w.letters().iter().map(|l| Letter::new(l.gen() % n, l.is_inverse())).collect() };
            let (u, v) = (clamp(&u), clamp(&v));
            let nu = ctx.nf(u.letters());
            prop_assert_eq!(ctx.nf(nu.letters()), nu.clone());
            let nv = ctx.nf(v.letters());
            prop_assert_eq!(ctx.mul_nf(&nu, &nv), ctx.nf(u.concat(&v).letters()));
            prop_assert!(ctx.mul_nf(&nu, &ctx.inv_nf(&nu)).is_empty());
        }

        #[test]
        fn coset_round_trip(g in words(3, 6), img in prop::collection::vec(0usize..6, 3)) {
            let ctx = GroupContext::parse("raag { a, b, z; a-z, b-z }").unwrap();
            // any assignment into an abelian group is a homomorphism of this RAAG
            let q = match FiniteQuotient::new(ctx.presentation(), FiniteGroup::cyclic(6), img, None) {
                Ok(q) => q,
                Err(_) => return Ok(()),
            };
            let g = ctx.nf(g.letters());
            let (h, cls) = ctx.coset_decompose(&g, &q);
            prop_assert_eq!(q.image(&h), 0);
            prop_assert_eq!(ctx.mul_nf(&h, q.section(cls)), g);
        }
    }
}
