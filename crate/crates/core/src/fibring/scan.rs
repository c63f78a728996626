//! Two-sided checks and character scans.

use serde_json::json;

use crate::chain::ChainComplex;
use crate::characters::Character;
use crate::value::{format_rational, Rational};

use super::certify::{sikorav_certify, CertifyOutcome, CutoffPolicy, DirectionStatus};
use super::FibringError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Combined {
    Fibred,
    NotFibredByRank,
    Inconclusive,
}

impl Combined {
    pub fn of(plus: DirectionStatus, minus: DirectionStatus) -> Combined {
        use DirectionStatus::*;
        match (plus, minus) {
            (Certified, Certified) => Combined::Fibred,
            (RefutedByRank, _) | (_, RefutedByRank) => Combined::NotFibredByRank,
            _ => Combined::Inconclusive,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Combined::Fibred => "Fibred",
            Combined::NotFibredByRank => "NotFibredByRank",
            Combined::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FibringVerdict {
    pub character: Character,
    /// Set when the input was rescaled to a primitive integral character.
    pub rescaled_by: Option<Rational>,
    pub plus: CertifyOutcome,
    pub minus: CertifyOutcome,
    pub verdict: Combined,
}

impl FibringVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let len = self.character.basis_len();
        let side = |o: &CertifyOutcome| match o {
            CertifyOutcome::Certified(c) => json!({
                "status": "Certified",
                "cutoff": c.cutoff.to_strings(len),
                "margin": c.margin.to_json(len),
                "openness_radius": c.radius,
                "certificate_digest": c.digest(),
            }),
            CertifyOutcome::RefutedByRank { reason } => json!({ "status": "RefutedByRank", "reason": reason }),
            CertifyOutcome::InconclusiveAtCutoff { cutoff, reason } => {
                json!({ "status": "InconclusiveAtCutoff", "cutoff": cutoff.to_strings(len), "reason": reason })
            }
        };
        let cert = self.plus.certificate().or(self.minus.certificate());
        json!({
            "character": self.character.to_json(),
            "rescaled_by": self.rescaled_by.as_ref().map(format_rational),
            "plus": side(&self.plus),
            "minus": side(&self.minus),
            "verdict": self.verdict.name(),
            "cutoff": cert.map(|c| json!(c.cutoff.to_strings(len))),
            "margin": cert.map(|c| c.margin.to_json(len)),
            "certificate_digest": cert.map(|c| c.digest()),
        })
    }
}

/// Certifies at `+φ` and `-φ`. A rational character is first rescaled to
/// the primitive integral character on the same ray.
pub fn fibred_check(cc: &ChainComplex, phi: &Character, policy: &CutoffPolicy) -> Result<FibringVerdict, FibringError> {
    let (character, rescaled_by) = if phi.is_rational() {
        let (p, factor) = phi.primitive().ok_or(FibringError::ZeroCharacter)?;
        let p = match &phi.label {
            Some(l) => p.with_label(l.clone()),
            None => p,
        };
        let changed = factor != Rational::from_integer(1.into());
        (p, changed.then_some(factor))
    } else {
        (phi.clone(), None)
    };
    let plus = sikorav_certify(cc, &character, policy)?;
    let minus = sikorav_certify(cc, &character.neg(), policy)?;
    let verdict = Combined::of(plus.status(), minus.status());
    Ok(FibringVerdict { character, rescaled_by, plus, minus, verdict })
}

#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub index: usize,
    pub result: Result<FibringVerdict, FibringError>,
}

#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn verdicts(&self) -> impl Iterator<Item = &FibringVerdict> {
        self.entries.iter().filter_map(|e| e.result.as_ref().ok())
    }

    /// Samples certified on both sides.
    pub fn certified_cone(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| matches!(&e.result, Ok(v) if v.verdict == Combined::Fibred))
            .map(|e| e.index)
            .collect()
    }

    pub fn count(&self, c: Combined) -> usize {
        self.verdicts().filter(|v| v.verdict == c).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| match &e.result {
                Ok(v) => {
                    let mut j = v.to_json();
                    j["index"] = json!(e.index);
                    j
                }
                Err(err) => json!({ "index": e.index, "error": err.to_string() }),
            })
            .collect();
        json!({
            "samples": self.entries.len(),
            "fibred": self.count(Combined::Fibred),
            "not_fibred_by_rank": self.count(Combined::NotFibredByRank),
            "inconclusive": self.count(Combined::Inconclusive),
            "certified_cone": self.certified_cone(),
            "entries": entries,
        })
    }
}

/// Runs [`fibred_check`] on every sample across threads; failures are
/// recorded per sample and the report is ordered by sample index.
pub fn character_scan(cc: &ChainComplex, samples: &[Character], policy: &CutoffPolicy) -> ScanReport {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(samples.len().max(1));
    let mut slots: Vec<Option<Result<FibringVerdict, FibringError>>> = vec![None; samples.len()];
    std::thread::scope(|scope| {
        for (t, chunk) in slots.chunks_mut(samples.len().div_ceil(threads).max(1)).enumerate() {
            let start = t * samples.len().div_ceil(threads).max(1);
            scope.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(fibred_check(cc, &samples[start + i], policy));
                }
            });
        }
    });
    let entries = slots
        .into_iter()
        .enumerate()
        .map(|(index, r)| ScanEntry { index, result: r.expect("every slot is filled") })
        .collect();
    ScanReport { entries }
}
