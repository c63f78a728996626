//! Reidemeister–Schreier presentations of `H = ker β` for a finite quotient
//! `β: G → Q`.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::context::GroupContext;
use super::presentation::{GroupPresentation, NormalFormEngine};
use super::quotient::FiniteQuotient;
use super::word::{Letter, Word};
use super::GroupError;

/// Normal forms in `H`: map into the parent, normalize there, and rewrite
/// the result along the Schreier graph.
#[derive(Debug)]
pub struct SubgroupEngine {
    parent: GroupContext,
    quotient: FiniteQuotient,
    /// Parent normal forms of `s(q)`.
    section_nf: Vec<Word>,
    /// Schreier generator `γ(q, j)` (index `q·n + j`) as a word in the
    /// reduced generators.
    original_to_reduced: Vec<Word>,
    /// Reduced generator → parent normal form.
    inclusion: Vec<Word>,
}

impl SubgroupEngine {
    pub fn parent(&self) -> &GroupContext {
        &self.parent
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.quotient
    }

    pub fn inclusion(&self) -> &[Word] {
        &self.inclusion
    }

    pub fn section_nf(&self, q: usize) -> &Word {
        &self.section_nf[q]
    }

    /// Parent normal form of an `H`-word.
    pub fn include(&self, w: &Word) -> Result<Word, GroupError> {
        self.parent.normalize(w.substitute(&self.inclusion).letters())
    }

    /// Rewrites a parent word lying in `H` onto the reduced generators.
    /// The output depends only on the input word, so feeding it parent
    /// normal forms gives canonical `H`-words.
    pub fn rewrite(&self, parent_word: &[Letter]) -> Result<Word, GroupError> {
        let n = self.parent.generators();
        let mut c = 0usize;
        let mut out = Vec::new();
        for &l in parent_word {
            let j = l.gen();
            if l.is_inverse() {
                c = self.quotient.mul(c, self.quotient.letter_image(l));
                out.extend(self.original_to_reduced[c * n + j].inverse().0);
            } else {
                out.extend_from_slice(self.original_to_reduced[c * n + j].letters());
                c = self.quotient.mul(c, self.quotient.letter_image(l));
            }
        }
        if c != 0 {
            return Err(GroupError::NotInSubgroup);
        }
        Ok(Word(out).free_reduce())
    }

    /// The `H`-normal form of a parent element, if it lies in `H`.
    pub fn restrict(&self, parent_word: &Word) -> Result<Word, GroupError> {
        let g = self.parent.normalize(parent_word.letters())?;
        self.rewrite(g.letters())
    }

    pub fn normalize(&self, letters: &[Letter]) -> Result<Word, GroupError> {
        self.restrict(&Word(letters.to_vec()).substitute(&self.inclusion))
    }

    /// `s(q) h s(q)⁻¹` for an `H`-word `h`, as an `H`-normal form.
    pub fn conjugate(&self, q: usize, h: &Word) -> Result<Word, GroupError> {
        let s = &self.section_nf[q];
        let w = s.concat(&h.substitute(&self.inclusion)).concat(&s.inverse());
        self.restrict(&w)
    }
}

/// Presentation of `ker β` with its [`SubgroupEngine`]. A trivial quotient
/// returns the parent presentation unchanged.
///
/// Schreier generators `γ(q, x) = s(q) x s(qx)⁻¹` are named `x_q`. Relators
/// are the rewrites of every relator read from every coset, plus the
/// rewrites of the section words; Tietze moves then remove generators that
/// a relator of length one or two expresses through the others.
pub fn subgroup_presentation(ctx: &GroupContext, quot: &FiniteQuotient) -> Result<GroupPresentation, GroupError> {
    let parent = ctx.presentation();
    if quot.order() == 1 {
        return Ok(parent.clone());
    }
    let bound = super::quotient::max_quotient_order();
    if quot.order() > bound {
        return Err(GroupError::QuotientTooLarge { order: quot.order(), bound });
    }
    let n = parent.rank();
    let order = quot.order();
    let total = order * n;
    let gamma = |q: usize, j: usize| -> Word {
        let qx = quot.mul(q, quot.images()[j]);
        quot.section(q).concat(&Word::gen(j)).concat(&quot.section(qx).inverse())
    };
    // τ read from coset `start`, in the original Schreier generators
    let tau = |w: &Word, start: usize| -> (Word, usize) {
        let mut c = start;
        let mut out = Vec::new();
        for &l in w.letters() {
            let j = l.gen();
            if l.is_inverse() {
                c = quot.mul(c, quot.letter_image(l));
                out.push(Letter::neg(c * n + j));
            } else {
                out.push(Letter::pos(c * n + j));
                c = quot.mul(c, quot.letter_image(l));
            }
        }
        (Word(out), c)
    };

    let mut relators = Vec::new();
    for r in &parent.relators {
        for q in 0..order {
            relators.push(tau(r, q).0);
        }
    }
    for q in 1..order {
        let (w, end) = tau(quot.section(q), 0);
        debug_assert_eq!(end, q);
        relators.push(w);
    }
    let section_nf: Vec<Word> = quot.sections().iter().map(|w| ctx.normalize(w.letters())).collect::<Result<_, _>>()?;
    let gamma_nf: Vec<Word> = (0..total)
        .map(|i| ctx.normalize(gamma(i / n, i % n).letters()))
        .collect::<Result<_, _>>()?;
    for (i, g) in gamma_nf.iter().enumerate() {
        if g.is_empty() {
            relators.push(Word::gen(i));
        }
    }

    // Tietze elimination over the original index set.
    let mut subst: Vec<Word> = (0..total).map(Word::gen).collect();
    let mut alive = vec![true; total];
    loop {
        let mut seen = BTreeSet::new();
        relators = relators
            .iter()
            .map(Word::cyclic_reduce)
            .filter(|r| !r.is_empty() && seen.insert(r.clone()))
            .collect();
        let pick = relators.iter().find_map(|r| match r.letters() {
            [x] => Some((x.gen(), Word::empty())),
            [x, y] if x.gen() != y.gen() => {
                // eliminate the later generator, keeping lower indices
                let (e, other) = if x.gen() > y.gen() { (*x, *y) } else { (*y, *x) };
                // e·other = 1 or other·e = 1 (cyclically the same)
                let rep = Word(vec![other.inverse()]);
                Some((e.gen(), if e.is_inverse() { rep.inverse() } else { rep }))
            }
            _ => None,
        });
        let Some((g, rep)) = pick else { break };
        let mut images: Vec<Word> = (0..total).map(Word::gen).collect();
        images[g] = rep;
        alive[g] = false;
        for r in relators.iter_mut() {
            *r = r.substitute(&images).free_reduce();
        }
        for s in subst.iter_mut() {
            *s = s.substitute(&images).free_reduce();
        }
    }

    let kept: Vec<usize> = (0..total).filter(|&i| alive[i]).collect();
    let mut renumber = vec![Word::empty(); total];
    for (new, &old) in kept.iter().enumerate() {
        renumber[old] = Word::gen(new);
    }
    let relators: Vec<Word> = relators.iter().map(|r| r.substitute(&renumber)).collect();
    let original_to_reduced: Vec<Word> = subst.iter().map(|s| s.substitute(&renumber)).collect();
    let generators: Vec<String> = kept
        .iter()
        .map(|&i| format!("{}_{}", parent.generators[i % n], i / n))
        .collect();
    let inclusion: Vec<Word> = kept.iter().map(|&i| gamma_nf[i].clone()).collect();
    let engine = SubgroupEngine { parent: ctx.clone(), quotient: quot.clone(), section_nf, original_to_reduced, inclusion };
    Ok(GroupPresentation { generators, relators, engine: NormalFormEngine::Subgroup(Arc::new(engine)) })
}

/// The subgroup as a context of its own.
pub fn subgroup_context(ctx: &GroupContext, quot: &FiniteQuotient) -> Result<GroupContext, GroupError> {
    GroupContext::new(subgroup_presentation(ctx, quot)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::quotient::FiniteGroup;

    fn quotient(ctx: &GroupContext, g: FiniteGroup, images: Vec<usize>) -> FiniteQuotient {
        FiniteQuotient::new(ctx.presentation(), g, images, None).unwrap()
    }

    #[test]
    fn z_index_two() {
        let ctx = GroupContext::parse("raag { t; }").unwrap();
        let h = subgroup_context(&ctx, &quotient(&ctx, FiniteGroup::cyclic(2), vec![1])).unwrap();
        assert_eq!(h.generators(), 1);
        assert_eq!(h.abelianization().rank, 1);
        let eng = h.subgroup_engine().unwrap();
        assert_eq!(ctx.presentation().word_to_string(&eng.inclusion()[0]), "t^2");
    }

    #[test]
    fn trivial_quotient_is_identity() {
        let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let p = subgroup_presentation(&ctx, &quotient(&ctx, FiniteGroup::cyclic(1), vec![0, 0])).unwrap();
        assert_eq!(p.to_source(), ctx.presentation().to_source());
    }

    #[test]
    fn free_group_index_two_has_rank_three() {
        let ctx = GroupContext::parse("raag { a, b; }").unwrap();
        let h = subgroup_context(&ctx, &quotient(&ctx, FiniteGroup::cyclic(2), vec![1, 0])).unwrap();
        assert_eq!(h.generators(), 3);
        assert!(h.presentation().relators.is_empty());
        assert_eq!(h.abelianization().rank, 3);
    }

    #[test]
    fn nielsen_schreier_ranks() {
        // rank(H) = [G:H](n - 1) + 1 for free G
        let ctx = GroupContext::parse("raag { a, b; }").unwrap();
        for (g, images) in [
            (FiniteGroup::cyclic(3), vec![1, 1]),
            (FiniteGroup::cyclic(4), vec![1, 2]),
            (FiniteGroup::dihedral(3), vec![1, 3]),
        ] {
            let k = g.order();
            let h = subgroup_context(&ctx, &quotient(&ctx, g, images)).unwrap();
            assert_eq!(h.abelianization().rank, k + 1);
        }
    }

    #[test]
    fn infinite_dihedral_kernel_is_z() {
        let ctx = GroupContext::parse("pres { a, b | a^2, b^2 } rewriting { a a -> 1; b b -> 1; a^-1 -> a; b^-1 -> b }").unwrap();
        let h = subgroup_context(&ctx, &quotient(&ctx, FiniteGroup::cyclic(2), vec![1, 1])).unwrap();
        assert_eq!(h.generators(), 1);
        assert!(h.presentation().relators.is_empty());
        let eng = h.subgroup_engine().unwrap();
        let x = &eng.inclusion()[0];
        assert_eq!(x.len(), 2);
        // normal forms in H of (ab)^3 and (ba)^-3 agree
        let ab = ctx.nf(&[Letter::pos(0), Letter::pos(1)]);
        let w1 = eng.restrict(&ab.pow(3)).unwrap();
        let w2 = eng.restrict(&ab.inverse().inverse().pow(3)).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(w1.len(), 3);
    }

    #[test]
    fn abelian_kernel_and_tower() {
        let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let h = subgroup_context(&ctx, &quotient(&ctx, FiniteGroup::cyclic(2), vec![1, 0])).unwrap();
        assert_eq!(h.abelianization().rank, 2);
        assert!(h.abelianization().torsion.is_empty());
        let q2 = FiniteQuotient::new(h.presentation(), FiniteGroup::cyclic(3), vec![1; h.generators()], None);
        let q2 = q2.unwrap();
        let k = subgroup_context(&h, &q2).unwrap();
        assert_eq!(k.abelianization().rank, 2);
        // normal forms in the tower are multiplicative
        let x = k.generator(0);
        let y = k.generator(k.generators() - 1);
        assert_eq!(x.mul(&y), y.mul(&x));
        assert!(x.mul(&x.inv()).is_identity());
    }

    #[test]
    fn conjugation_stays_in_h() {
        let ctx = GroupContext::parse("raag { a, b; }").unwrap();
        let h = subgroup_context(&ctx, &quotient(&ctx, FiniteGroup::cyclic(2), vec![1, 0])).unwrap();
        let eng = h.subgroup_engine().unwrap();
        for g in 0..h.generators() {
            let c = eng.conjugate(1, &Word::gen(g)).unwrap();
            let back = eng.include(&c).unwrap();
            let s = eng.section_nf(1);
            let direct = ctx.nf(s.concat(&eng.inclusion()[g]).concat(&s.inverse()).letters());
            assert_eq!(back, direct);
        }
    }
}
