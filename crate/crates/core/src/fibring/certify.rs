//! Finite certificates that `H₁(G; Nov(G, φ)) = 0`.
//!
//! With pivot generator `s`, the relator boundaries written in the cycle
//! basis `{e_t'}` form `J'`, the Fox Jacobian with column `s` removed. A
//! certificate is a finite matrix `L` over `ℚG` with `L·J' = I - M` and
//! `φ(M) > 0` entrywise: then `I - M` is invertible over the Novikov ring,
//! so the relator boundaries span all Novikov cycles.

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::chain::{cycle_basis, pivot_generator, ChainComplex};
use crate::characters::Character;
use crate::groups::{GroupContext, Letter, Word};
use crate::novikov::{NovikovError, NovikovMatrix, NovikovRing};
use crate::ring::RingElement;
use crate::value::{rat, Rational, Valuation, Value};

use super::FibringError;

/// How the cutoff is chosen: the default is `8 · max |φ(x)|`; either way it
/// is doubled up to `retries` times while the result is inconclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffPolicy {
    pub cutoff: Option<Value>,
    pub retries: u32,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy { cutoff: None, retries: 2 }
    }
}

impl CutoffPolicy {
    pub fn fixed(cutoff: Value) -> Self {
        CutoffPolicy { cutoff: Some(cutoff), retries: 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DirectionStatus {
    Certified,
    RefutedByRank,
    InconclusiveAtCutoff,
}

impl DirectionStatus {
    pub fn name(self) -> &'static str {
        match self {
            DirectionStatus::Certified => "Certified",
            DirectionStatus::RefutedByRank => "RefutedByRank",
            DirectionStatus::InconclusiveAtCutoff => "InconclusiveAtCutoff",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub character: Character,
    pub cutoff: Value,
    pub pivot: usize,
    /// Generators `t ≠ s` indexing the cycle basis, in order.
    pub columns: Vec<usize>,
    /// `columns.len() × relators`.
    pub l: Vec<Vec<RingElement>>,
    /// `I - L·J'`.
    pub correction: Vec<Vec<RingElement>>,
    /// Least `φ`-value in the correction; infinite when it vanishes.
    pub margin: Valuation,
    /// Radius of a ball of characters around `φ` (Euclidean norm on the
    /// coordinates of the free abelianization) certified by the same `L`.
    pub radius: Option<f64>,
    pub cycle_basis_digest: String,
}

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(Box<Certificate>),
    RefutedByRank { reason: String },
    InconclusiveAtCutoff { cutoff: Value, reason: String },
}

impl CertifyOutcome {
    pub fn status(&self) -> DirectionStatus {
        match self {
            CertifyOutcome::Certified(_) => DirectionStatus::Certified,
            CertifyOutcome::RefutedByRank { .. } => DirectionStatus::RefutedByRank,
            CertifyOutcome::InconclusiveAtCutoff { .. } => DirectionStatus::InconclusiveAtCutoff,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

pub fn sikorav_certify(cc: &ChainComplex, phi: &Character, policy: &CutoffPolicy) -> Result<CertifyOutcome, FibringError> {
    let ctx = cc.context();
    phi.check_rank(ctx)?;
    let s = pivot_generator(ctx, phi).map_err(|_| FibringError::ZeroCharacter)?;
    let ring = NovikovRing::new(ctx, phi)?;
    let mut cutoff = match &policy.cutoff {
        Some(c) if !c.is_positive() => return Err(FibringError::InvalidCutoff(c.to_string())),
        Some(c) => c.clone(),
        None => ring.default_cutoff(),
    };
    let n = cc.generators();
    let columns: Vec<usize> = (0..n).filter(|&t| t != s).collect();
    let j = cc.reduced_jacobian(s);
    let (m, k) = (j.len(), columns.len());
    if m < k {
        return Ok(CertifyOutcome::RefutedByRank { reason: format!("{m} relators cannot span {k} independent cycles") });
    }
    if let Some(c) = (0..k).find(|&c| j.iter().all(|row| row[c].is_zero())) {
        let name = &ctx.names()[columns[c]];
        return Ok(CertifyOutcome::RefutedByRank { reason: format!("no relator boundary meets the cycle e_{name}'") });
    }
    let mut last_reason = String::new();
    for _ in 0..=policy.retries {
        match attempt(cc, &ring, s, &columns, &j, &cutoff)? {
            Ok(cert) => return Ok(CertifyOutcome::Certified(Box::new(cert))),
            Err(reason) => last_reason = reason,
        }
        cutoff = cutoff.scale_int(2);
    }
    Ok(CertifyOutcome::InconclusiveAtCutoff { cutoff: cutoff.scale(&Rational::new(1.into(), 2.into())), reason: last_reason })
}

type Attempt = Result<Certificate, String>;

fn attempt(
    cc: &ChainComplex,
    ring: &std::sync::Arc<NovikovRing>,
    s: usize,
    columns: &[usize],
    j: &[Vec<RingElement>],
    cutoff: &Value,
) -> Result<Attempt, FibringError> {
    let ctx = cc.context();
    let phi = ring.character();
    let k = columns.len();
    let target = Valuation::Finite(cutoff.clone());
    let digest = cycle_basis_digest(cc, phi, &target)?;
    let l = if k == 0 {
        Vec::new()
    } else {
        let jm = NovikovMatrix::from_ring_matrix(ring, j, k, &Valuation::Infinite);
        let elim = match jm.eliminate(&target) {
            Ok(e) => e,
            Err(NovikovError::InconclusiveAtCutoff(c)) => return Ok(Err(format!("no invertible pivot at cutoff {c}"))),
            Err(NovikovError::StrictGapViolation(x)) => return Ok(Err(format!("pivot {x} lacks a strict gap"))),
            Err(e) => return Err(e.into()),
        };
        if elim.rank < k {
            return Ok(Err(format!("rank {} < {k} modulo the cutoff", elim.rank)));
        }
        let mut l = vec![Vec::new(); k];
        for (r, &(_, col)) in elim.pivots.iter().enumerate() {
            l[col] = elim.l.row(r).iter().map(|e| e.body().clone()).collect();
        }
        l
    };
    let correction = correction_matrix(ctx, &l, j);
    let margin = correction.iter().flatten().map(|x| x.valuation(phi)).min().unwrap_or(Valuation::Infinite);
    if let Valuation::Finite(v) = &margin {
        if !v.is_positive() {
            return Ok(Err(format!("correction has value {v} ≤ 0")));
        }
    }
    let radius = openness_radius(ctx, phi, s, &correction);
    Ok(Ok(Certificate {
        character: phi.clone(),
        cutoff: cutoff.clone(),
        pivot: s,
        columns: columns.to_vec(),
        l,
        correction,
        margin,
        radius,
        cycle_basis_digest: digest,
    }))
}

fn correction_matrix(ctx: &GroupContext, l: &[Vec<RingElement>], j: &[Vec<RingElement>]) -> Vec<Vec<RingElement>> {
    let k = l.len();
    (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let mut p = if a == b { RingElement::one(ctx) } else { RingElement::zero(ctx) };
                    for (x, row) in l[a].iter().zip(j) {
                        p = &p - &(x * &row[b]);
                    }
                    p
                })
                .collect()
        })
        .collect()
}

fn cycle_basis_digest(cc: &ChainComplex, phi: &Character, cutoff: &Valuation) -> Result<String, FibringError> {
    let basis = cycle_basis(cc, phi, cutoff)?;
    let rows: Vec<serde_json::Value> = basis
        .basis
        .iter()
        .map(|(t, row)| json!({ "t": t, "row": row.iter().map(|e| e.body().to_json()).collect::<Vec<_>>() }))
        .collect();
    Ok(sha256(&json!({ "pivot": basis.pivot, "basis": rows })))
}

pub fn sha256(v: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(serde_json::to_string(v).expect("serializable").as_bytes()))
}

/// `min φ(g) / ‖α(g)‖` over the support of the correction, and
/// `|φ(s)| / ‖α(s)‖` so that the pivot stays usable.
fn openness_radius(ctx: &GroupContext, phi: &Character, s: usize, correction: &[Vec<RingElement>]) -> Option<f64> {
    let norm = |w: &Word| ctx.abelian_coords(w).iter().map(|&c| (c as f64).powi(2)).sum::<f64>().sqrt();
    let pivot = Word::gen(s);
    let mut r = phi.evaluate(ctx, &pivot).abs().to_f64() / norm(&pivot);
    for g in correction.iter().flatten().flat_map(|x| x.support()) {
        let n = norm(g);
        if n > 0.0 {
            r = r.min(phi.evaluate(ctx, g).to_f64() / n);
        }
    }
    r.is_finite().then_some(r)
}

impl Certificate {
    pub fn digest(&self) -> String {
        sha256(&self.to_json_body())
    }

    fn to_json_body(&self) -> serde_json::Value {
        let mat = |m: &[Vec<RingElement>]| -> Vec<Vec<serde_json::Value>> {
            m.iter().map(|row| row.iter().map(RingElement::to_json).collect()).collect()
        };
        let len = self.character.basis_len();
        json!({
            "character": self.character.to_json(),
            "cutoff": self.cutoff.to_strings(len),
            "pivot": self.pivot,
            "columns": self.columns,
            "L": mat(&self.l),
            "R": "identity",
            "correction": mat(&self.correction),
            "margin": self.margin.to_json(len),
            "cycle_basis_digest": self.cycle_basis_digest,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.to_json_body();
        v["digest"] = json!(self.digest());
        v["openness_radius"] = json!(self.radius);
        v
    }
}

/// Re-checks a certificate from the presentation alone: Fox derivatives are
/// expanded letter by letter and products formed by concatenating words,
/// sharing nothing with the elimination.
pub fn verify_certificate(ctx: &GroupContext, cert: &Certificate) -> Result<(), String> {
    let phi = &cert.character;
    let n = ctx.generators();
    let k = cert.columns.len();
    let expected: Vec<usize> = (0..n).filter(|&t| t != cert.pivot).collect();
    if cert.columns != expected {
        return Err("columns do not match the pivot".into());
    }
    if phi.evaluate(ctx, &Word::gen(cert.pivot)).is_zero() {
        return Err("φ vanishes on the pivot".into());
    }
    let relators = &ctx.presentation().relators;
    if cert.l.len() != k || cert.l.iter().any(|row| row.len() != relators.len()) {
        return Err("L has the wrong shape".into());
    }
    let jac: Vec<Vec<Vec<(Word, Rational)>>> = relators
        .iter()
        .map(|r| expected.iter().map(|&t| naive_fox(r, t)).collect())
        .collect();
    let mut least: Option<Value> = None;
    for a in 0..k {
        for b in 0..k {
            let mut acc: std::collections::BTreeMap<Word, Rational> = std::collections::BTreeMap::new();
            if a == b {
                acc.insert(Word::empty(), rat(1));
            }
            for (i, x) in cert.l[a].iter().enumerate() {
                for (g, c) in x.terms() {
                    for (h, d) in &jac[i][b] {
                        let w = ctx.nf(g.concat(h).letters());
                        *acc.entry(w).or_insert_with(|| rat(0)) -= c * d;
                    }
                }
            }
            for (w, c) in acc {
                if c == rat(0) {
                    continue;
                }
                let v = phi.evaluate(ctx, &w);
                if !v.is_positive() {
                    return Err(format!("correction entry ({a},{b}) has a term of value {v}"));
                }
                if least.as_ref().is_none_or(|l| &v < l) {
                    least = Some(v);
                }
            }
        }
    }
    let margin = least.map(Valuation::Finite).unwrap_or(Valuation::Infinite);
    if margin != cert.margin {
        return Err(format!("margin {} differs from the recorded {}", margin, cert.margin));
    }
    Ok(())
}

/// `∂w/∂x_t` as unnormalized words.
fn naive_fox(w: &Word, t: usize) -> Vec<(Word, Rational)> {
    let mut out = Vec::new();
    for (i, l) in w.letters().iter().enumerate() {
        if l.gen() != t {
            continue;
        }
        let prefix: Vec<Letter> = w.letters()[..i].to_vec();
        if l.is_inverse() {
            let mut p = prefix;
            p.push(*l);
            out.push((Word(p), rat(-1)));
        } else {
            out.push((Word(prefix), rat(1)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn certify(src: &str, phi: Character) -> CertifyOutcome {
        let ctx = GroupContext::parse(src).unwrap();
        let cc = ChainComplex::build(&ctx).unwrap();
        let out = sikorav_certify(&cc, &phi, &CutoffPolicy::default()).unwrap();
        if let Some(c) = out.certificate() {
            verify_certificate(&ctx, c).unwrap();
        }
        out
    }

    #[test]
    fn cyclic_group_is_certified() {
        for s in [1, -1] {
            let out = certify("raag { t; }", Character::integral(&[s]));
            let cert = out.certificate().unwrap();
            assert!(cert.columns.is_empty() && cert.margin.is_infinite());
        }
    }

    #[test]
    fn free_group_is_refuted() {
        let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1))]);
        assert_eq!(certify("raag { a, b; }", phi).status(), DirectionStatus::RefutedByRank);
    }

    #[test]
    fn free_abelian_is_certified() {
        let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1))]);
        let out = certify("raag { a, b; a-b }", phi.clone());
        let cert = out.certificate().unwrap();
        assert_eq!(cert.pivot, 1);
        assert!(cert.radius.unwrap() > 0.0);
        assert_eq!(certify("raag { a, b; a-b }", phi.neg()).status(), DirectionStatus::Certified);
        assert_eq!(certify("raag { a, b; a-b }", Character::integral(&[1, 0])).status(), DirectionStatus::Certified);
    }

    #[test]
    fn zero_character_is_an_error() {
        let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let cc = ChainComplex::build(&ctx).unwrap();
        let err = sikorav_certify(&cc, &Character::integral(&[0, 0]), &CutoffPolicy::default()).unwrap_err();
        assert_eq!(err, FibringError::ZeroCharacter);
        let bad = CutoffPolicy::fixed(Value::int(-1));
        assert!(matches!(sikorav_certify(&cc, &Character::integral(&[1, 0]), &bad), Err(FibringError::InvalidCutoff(_))));
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let ctx = GroupContext::parse("raag { a, z, b; a-z, z-b }").unwrap();
        let cc = ChainComplex::build(&ctx).unwrap();
        let out = sikorav_certify(&cc, &Character::integral(&[0, 1, 0]), &CutoffPolicy::default()).unwrap();
        let mut cert = out.certificate().unwrap().clone();
        verify_certificate(&ctx, &cert).unwrap();
        cert.l[0][0] = &cert.l[0][0] + &RingElement::one(&ctx);
        assert!(verify_certificate(&ctx, &cert).is_err());
    }
}
