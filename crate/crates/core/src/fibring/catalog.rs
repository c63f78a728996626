//! Desk-scale catalog of groups with known `β₁⁽²⁾` and BNS invariants, and
//! the harness checking certifier verdicts against them.

use num::Zero;
use rand::seq::SliceRandom;
use serde_json::json;

use crate::chain::ChainComplex;
use crate::characters::Character;
use crate::groups::subgroup::subgroup_context;
use crate::groups::{FiniteGroup, FiniteQuotient, GroupContext};
use crate::random;
use crate::value::{format_rational, Rational, Value};

use super::betti::betti1_abelian;
use super::certify::{verify_certificate, CutoffPolicy, DirectionStatus};
use super::oracle::SigmaOracle;
use super::scan::{character_scan, Combined, ScanReport};
use super::FibringError;

pub const BS12: &str = "pres { a, t | t a t^-1 a^-2 } affine(a, t, 2)";
pub const BS12_INVERTED: &str = "pres { a, t | t^-1 a t a^-2 } affine(a, t^-1, 2)";
/// Same group as [`BS12`] with the unary rewriting normal form; its words
/// grow exponentially in the `t`-exponent.
pub const BS12_REWRITING: &str = "pres { a, t | t a t^-1 a^-2 } rewriting(recursive) { a a t -> t a; a t^-1 -> t^-1 a a; a^-1 t -> a t a^-1; a^-1 t^-1 -> t^-1 a^-1 a^-1 }";
pub const DINF: &str = "pres { a, b | a^2, b^2 } rewriting { a a -> 1; b b -> 1; a^-1 -> a; b^-1 -> b }";

/// A finite quotient whose kernel is scanned in place of the group.
#[derive(Clone, Debug)]
pub struct Tower {
    pub group: FiniteGroup,
    pub images: Vec<usize>,
    pub oracle: SigmaOracle,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub known_betti1: Rational,
    pub oracle: Option<SigmaOracle>,
    /// Whether the group is virtually RFRS, so that vanishing `β₁⁽²⁾` must
    /// be witnessed by a fibred character somewhere in the tower.
    pub virtually_rfrs: bool,
    pub provenance: &'static str,
    pub tower: Option<Tower>,
}

impl CatalogEntry {
    pub fn context(&self) -> Result<GroupContext, FibringError> {
        Ok(GroupContext::parse(self.source)?)
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn raag_oracle(n: usize, edges: &[(usize, usize)]) -> Option<SigmaOracle> {
    Some(SigmaOracle::Raag { vertices: n, edges: edges.to_vec() })
}

pub fn catalog() -> Vec<CatalogEntry> {
    let entry = |name, source, b: i64, oracle, provenance| CatalogEntry {
        name,
        source,
        known_betti1: int(b),
        oracle,
        virtually_rfrs: true,
        provenance,
        tower: None,
    };
    vec![
        entry("Z", "raag { t; }", 0, Some(SigmaOracle::FreeAbelian), "free abelian: β₁⁽²⁾ = 0, Σ is the whole sphere"),
        entry("Z2", "raag { a, b; a-b }", 0, Some(SigmaOracle::FreeAbelian), "free abelian"),
        entry("Z3", "raag { a, b, c; a-b, a-c, b-c }", 0, Some(SigmaOracle::FreeAbelian), "free abelian"),
        entry("F2", "raag { a, b; }", 1, Some(SigmaOracle::Free { rank: 2 }), "free group: β₁⁽²⁾ = n - 1, Σ empty"),
        entry("F3", "raag { a, b, c; }", 2, Some(SigmaOracle::Free { rank: 3 }), "free group: β₁⁽²⁾ = n - 1, Σ empty"),
        entry(
            "F2xZ",
            "raag { a, z, b; a-z, z-b }",
            0,
            raag_oracle(3, &[(0, 1), (1, 2)]),
            "RAAG on the path a-z-b: Davis–Leary value 0, Meier–VanWyk oracle",
        ),
        entry(
            "F2xF2",
            "raag { a, b, c, d; a-b, b-c, c-d, d-a }",
            0,
            raag_oracle(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
            "RAAG on the 4-cycle: Künneth gives 0, Meier–VanWyk oracle",
        ),
        CatalogEntry {
            virtually_rfrs: false,
            ..entry(
                "BS12",
                BS12,
                0,
                Some(SigmaOracle::BaumslagSolitar { t: 1, sign: -1 }),
                "amenable, so β₁⁽²⁾ = 0; ker φ = ℤ[1/2]; Σ = {φ(t) < 0} for right Cayley graphs",
            )
        },
        CatalogEntry {
            virtually_rfrs: false,
            ..entry(
                "BS12-inverted",
                BS12_INVERTED,
                0,
                Some(SigmaOracle::BaumslagSolitar { t: 1, sign: 1 }),
                "the same group with t replaced by t⁻¹: Σ = {φ(t) > 0}",
            )
        },
        CatalogEntry {
            tower: Some(Tower { group: FiniteGroup::cyclic(2), images: vec![1, 1], oracle: SigmaOracle::FreeAbelian }),
            ..entry("Dinf", DINF, 0, None, "virtually ℤ: β₁⁽²⁾ = 0, no characters; the index-2 kernel is ℤ")
        },
    ]
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

/// Primitive integral vectors in a sup-norm ball just large enough to hold
/// `count` of them (radius at most 4), then a seeded choice of `count`,
/// returned in canonical order.
pub fn sample_rays(rank: usize, count: usize, seed: u64) -> Vec<Character> {
    if rank == 0 || count == 0 {
        return Vec::new();
    }
    let mut pool = Vec::new();
    for radius in 1..=4i64 {
        pool = primitive_vectors(rank, radius);
        if pool.len() >= count {
            break;
        }
    }
    if pool.len() > count {
        let mut rng = random::rng(seed);
        pool.shuffle(&mut rng);
        pool.truncate(count);
        pool.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.clone()));
    }
    pool.iter().map(|v| Character::integral(v)).collect()
}

/// Every primitive integral ray with coordinates in `[-radius, radius]`;
/// empty for radius 0.
pub fn grid_rays(rank: usize, radius: u32) -> Vec<Character> {
    if rank == 0 || radius == 0 {
        return Vec::new();
    }
    let mut v = primitive_vectors(rank, radius as i64);
    v.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.clone()));
    v.iter().map(|v| Character::integral(v)).collect()
}

fn primitive_vectors(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-radius; rank];
    loop {
        let g = v.iter().fold(0i64, |g, &x| num::integer::gcd(g, x));
        if g == 1 {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == rank {
                out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.clone()));
                return out;
            }
            if v[i] < radius {
                v[i] += 1;
                break;
            }
            v[i] = -radius;
            i += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub name: String,
    pub known_betti1: Rational,
    pub computed_betti1: Option<Rational>,
    pub scan: ScanReport,
    pub tower_scan: Option<ScanReport>,
    /// Verdicts contradicting an oracle, or certificates failing the
    /// independent check.
    pub disagreements: Vec<String>,
    pub fibred_found: bool,
    pub pass: bool,
}

impl ConsistencyReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "known_betti1": format_rational(&self.known_betti1),
            "computed_betti1": self.computed_betti1.as_ref().map(format_rational),
            "scan": self.scan.to_json(),
            "tower_scan": self.tower_scan.as_ref().map(ScanReport::to_json),
            "disagreements": self.disagreements,
            "fibred_found": self.fibred_found,
            "result": if self.pass { "PASS" } else { "FAIL" },
        })
    }
}

fn audit(ctx: &GroupContext, report: &ScanReport, oracle: Option<&SigmaOracle>, out: &mut Vec<String>) {
    for e in &report.entries {
        let v = match &e.result {
            Ok(v) => v,
            Err(err) => {
                out.push(format!("sample {}: {err}", e.index));
                continue;
            }
        };
        for (sign, outcome) in [(1, &v.plus), (-1, &v.minus)] {
            let phi = if sign > 0 { v.character.clone() } else { v.character.neg() };
            if let Some(cert) = outcome.certificate() {
                if let Err(why) = verify_certificate(ctx, cert) {
                    out.push(format!("{phi}: certificate fails re-verification: {why}"));
                }
            }
            let Some(oracle) = oracle else { continue };
            let values: Vec<Value> = phi.generator_values(ctx);
            let Some(member) = oracle.contains(&values) else { continue };
            match (outcome.status(), member) {
                (DirectionStatus::Certified, false) => out.push(format!("{phi}: Certified but the oracle says not in Σ")),
                (DirectionStatus::RefutedByRank, true) => out.push(format!("{phi}: RefutedByRank but the oracle says in Σ")),
                _ => {}
            }
        }
    }
}

/// Scans sampled rays of the group (and of the tower kernel, if any) and
/// compares with the catalog's `β₁⁽²⁾` and oracle.
pub fn consistency_harness(entry: &CatalogEntry, samples: usize, seed: u64, policy: &CutoffPolicy) -> Result<ConsistencyReport, FibringError> {
    let ctx = entry.context()?;
    let cc = ChainComplex::build(&ctx)?;
    let rays = sample_rays(ctx.abelianization().rank, samples, seed);
    if entry.oracle.is_none() && !rays.is_empty() {
        return Err(FibringError::OracleMissing(entry.name.into()));
    }
    let scan = character_scan(&cc, &rays, policy);
    let mut disagreements = Vec::new();
    audit(&ctx, &scan, entry.oracle.as_ref(), &mut disagreements);
    let mut fibred_found = scan.count(Combined::Fibred) > 0;
    let tower_scan = match &entry.tower {
        Some(t) => {
            let quot = FiniteQuotient::new(ctx.presentation(), t.group.clone(), t.images.clone(), None)?;
            let h = subgroup_context(&ctx, &quot)?;
            let hcc = ChainComplex::build(&h)?;
            let rays = sample_rays(h.abelianization().rank, samples, seed);
            let s = character_scan(&hcc, &rays, policy);
            audit(&h, &s, Some(&t.oracle), &mut disagreements);
            fibred_found |= s.count(Combined::Fibred) > 0;
            Some(s)
        }
        None => None,
    };
    let computed_betti1 = if ctx.presentation().is_free_abelian() { Some(betti1_abelian(&cc)?) } else { None };
    if let Some(b) = &computed_betti1 {
        if b != &entry.known_betti1 {
            disagreements.push(format!("computed β₁⁽²⁾ = {b} but the catalog says {}", entry.known_betti1));
        }
    }
    let vanishing = entry.known_betti1.is_zero();
    let pass = disagreements.is_empty()
        && if vanishing { !entry.virtually_rfrs || fibred_found } else { !fibred_found };
    Ok(ConsistencyReport {
        name: entry.name.into(),
        known_betti1: entry.known_betti1.clone(),
        computed_betti1,
        scan,
        tower_scan,
        disagreements,
        fibred_found,
        pass,
    })
}
