//! Randomized property suites shared by `selftest` and the test targets.
//!
//! Every suite is deterministic in its seed and reports pass counts and the
//! first counterexample.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use crate::chain::{fox_expansion, ChainComplex};
use crate::characters::Character;
use crate::fibring::catalog::{catalog, sample_rays};
use crate::fibring::{fibred_check, sikorav_certify, verify_certificate, CutoffPolicy, DirectionStatus};
use crate::groups::subgroup::subgroup_context;
use crate::groups::{FiniteQuotient, GroupContext, Word};
use crate::novikov::NovikovRing;
use crate::qcalc::{check_inequalities, QCalculus, QError};
use crate::random::{self, Rng64};
use crate::ring::RingElement;
use crate::twisted::StructureFunctions;
use crate::value::{rat, Valuation, Value};

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Instances whose outcome was an expected inconclusive result.
    pub inconclusive: usize,
    pub counterexample: Option<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, passed: 0, failed: 0, inconclusive: 0, counterexample: None, elapsed: Duration::ZERO }
    }

    fn record(&mut self, ok: Result<(), String>) {
        match ok {
            Ok(()) => self.passed += 1,
            Err(e) => {
                self.failed += 1;
                if self.counterexample.is_none() {
                    self.counterexample = Some(e);
                }
            }
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "suite": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "inconclusive": self.inconclusive,
            "counterexample": self.counterexample,
        })
    }
}

/// The right-angled Artin groups of the catalog plus two small extras.
pub fn raag_groups() -> Vec<GroupContext> {
    let mut out: Vec<GroupContext> = catalog()
        .into_iter()
        .filter(|e| e.source.starts_with("raag") && !e.source.starts_with("raag { t;"))
        .map(|e| e.context().expect("catalog parses"))
        .collect();
    out.push(GroupContext::parse("raag { a, b, c; a-b }").expect("valid"));
    out
}

fn pick<'a>(rng: &mut Rng64, groups: &'a [GroupContext]) -> &'a GroupContext {
    groups.choose(rng).expect("non-empty")
}

/// Structure-function identities on random quotients and sections.
/// `corrupt` replaces one section word by a word outside its coset.
pub fn structure_functions(count: usize, max_q: usize, seed: u64, corrupt: bool) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("structure functions");
    let groups = raag_groups();
    let mut rng = random::rng(seed);
    for _ in 0..count {
        let ctx = pick(&mut rng, &groups);
        let mut quot = random::quotient(&mut rng, ctx, max_q);
        if corrupt && quot.order() > 1 {
            let mut s = quot.sections().to_vec();
            let q = rng.gen_range(1..s.len());
            let j = (0..ctx.generators()).find(|&j| quot.images()[j] != 0).expect("surjective");
            s[q] = s[q].concat(&Word::gen(j));
            quot = quot.with_section_unchecked(s);
        }
        let sf = StructureFunctions::compute(ctx, &quot);
        res.record(sf.verify().map_err(|e| format!("|Q| = {}, images {:?}: {e}", quot.order(), quot.images())));
    }
    res.finish(start)
}

fn quotient_pool(rng: &mut Rng64, groups: &[GroupContext], n: usize, max_q: usize) -> Vec<(GroupContext, FiniteQuotient)> {
    (0..n)
        .map(|_| {
            let ctx = pick(rng, groups).clone();
            let q = random::quotient(rng, &ctx, max_q);
            (ctx, q)
        })
        .collect()
}

/// `reassemble(split(x)·split(y)) = x·y`.
pub fn s_isomorphism(count: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("s-isomorphism");
    let mut rng = random::rng(seed);
    let pool: Vec<StructureFunctions> = quotient_pool(&mut rng, &raag_groups(), 10, 12)
        .into_iter()
        .map(|(ctx, q)| StructureFunctions::compute(&ctx, &q))
        .collect();
    for _ in 0..count {
        let sf = pool.choose(&mut rng).expect("non-empty");
        let ctx = sf.context();
        let x = random::element(&mut rng, ctx, 4, 5);
        let y = random::element(&mut rng, ctx, 4, 5);
        let lhs = sf.reassemble(&sf.twisted_mul(&sf.split(&x), &sf.split(&y)));
        res.record(if lhs == &x * &y { Ok(()) } else { Err(format!("x = {x}, y = {y}")) });
    }
    res.finish(start)
}

/// `φ(x+y) ≥ min`, `φ(xy) ≥ φ(x)+φ(y)`, and equality of the latter.
pub fn valuation_laws(count: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("valuation laws");
    let groups = raag_groups();
    let mut rng = random::rng(seed);
    for _ in 0..count {
        let ctx = pick(&mut rng, &groups);
        let irr = rng.gen_bool(0.5);
        let phi = random::character(&mut rng, ctx.abelianization().rank, irr);
        let x = random::element(&mut rng, ctx, 4, 5);
        let y = random::element(&mut rng, ctx, 4, 5);
        let (vx, vy) = (x.valuation(&phi), y.valuation(&phi));
        let sum = (&x + &y).valuation(&phi);
        let prod = (&x * &y).valuation(&phi);
        let ok = if sum < vx.clone().min(vy.clone()) {
            Err(format!("sum law fails for {x}, {y} at {phi}"))
        } else if prod != &vx + &vy {
            Err(format!("product law fails for {x}, {y} at {phi}"))
        } else {
            Ok(())
        };
        res.record(ok);
    }
    res.finish(start)
}

/// A strict-gap element with at most two higher terms whose gaps differ by
/// at least a factor of three. Over free groups the inverse has exponentially
/// many terms below `20·gap` once two higher terms share a gap, so the
/// spread keeps the series tractable.
fn sparse_gap_element(rng: &mut Rng64, ctx: &GroupContext, phi: &Character) -> (RingElement, Value) {
    loop {
        let (x, gap) = random::strict_gap_element(rng, ctx, phi, 2, 4);
        let v0 = x.valuation(phi).finite().cloned().expect("nonzero");
        let mut gaps: Vec<Value> = x.terms().map(|(g, _)| &phi.evaluate(ctx, g) - &v0).filter(Value::is_positive).collect();
        gaps.sort();
        if gaps.len() < 2 || gaps[1] >= gaps[0].scale_int(3) {
            return (x, gap);
        }
    }
}

/// Strict-gap inversion verified two-sidedly modulo `factor · gap`. An
/// `absolute` cutoff that does not exceed the gap leaves nothing to check
/// beyond the leading monomial; such instances count as inconclusive and
/// are re-run at `factor · gap`.
pub fn novikov_inversion(count: usize, seed: u64, factor: i64, absolute: Option<&Value>) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("Novikov inversion");
    let groups = raag_groups();
    let mut rng = random::rng(seed);
    for _ in 0..count {
        let ctx = pick(&mut rng, &groups);
        let phi = random::character(&mut rng, ctx.abelianization().rank, true);
        let ring = NovikovRing::new(ctx, &phi).expect("rank matches");
        let (x, gap) = sparse_gap_element(&mut rng, ctx, &phi);
        let x = ring.exact(x);
        let normal = gap.scale_int(factor);
        match absolute {
            Some(c) if c <= &gap => {
                res.inconclusive += 1;
                res.record(inverts_modulo(&x, &normal));
            }
            Some(c) => res.record(inverts_modulo(&x, c)),
            None => res.record(inverts_modulo(&x, &normal)),
        }
    }
    res.finish(start)
}

/// `x·x⁻¹ ≡ 1 ≡ x⁻¹·x` modulo `cutoff`.
fn inverts_modulo(x: &crate::novikov::NovikovElement, cutoff: &Value) -> Result<(), String> {
    let ring = x.ring();
    let v0 = x.valuation().finite().cloned().ok_or("zero element")?;
    let z = x.invert(&Valuation::Finite(cutoff - &v0)).map_err(|e| e.to_string())?;
    let want = Valuation::Finite(cutoff.clone());
    for (a, b) in [(x, &z), (&z, x)] {
        let p = a.mul(b).map_err(|e| e.to_string())?;
        if !p.sub(&ring.one()).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("product ≠ 1 for {x:?}"));
        }
        if p.cutoff() < &want {
            return Err(format!("product only known below {}", p.cutoff()));
        }
    }
    Ok(())
}

/// `(1-t)⁻¹ = 1 + t + t² + t³ + t⁴` at cutoff 5.
pub fn scalar_witness() -> Result<(), String> {
    let ctx = GroupContext::parse("raag { t; }").expect("valid");
    let ring = NovikovRing::new(&ctx, &Character::integral(&[1])).expect("rank 1");
    let x = ring.exact(&RingElement::one(&ctx) - &RingElement::from_word(&ctx, &Word::gen(0), rat(1)));
    let z = x.invert(&Valuation::Finite(Value::int(5))).map_err(|e| e.to_string())?;
    let expect = RingElement::from_terms(&ctx, (0..5).map(|i| (Word::gen(0).pow(i), rat(1))));
    if z.body() == &expect && z.cutoff() == &Valuation::Finite(Value::int(5)) {
        Ok(())
    } else {
        Err(format!("got {z:?}"))
    }
}

/// Fundamental identity on random words and `d1∘d2 = 0` on the catalog.
pub fn fox_identity(count: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("Fox identity");
    let groups: Vec<GroupContext> = catalog().iter().map(|e| e.context().expect("catalog parses")).collect();
    let mut rng = random::rng(seed);
    for _ in 0..count {
        let ctx = pick(&mut rng, &groups);
        let w = random::word(&mut rng, ctx.generators(), 8);
        let rhs = &RingElement::from_word(ctx, &w, rat(1)) - &RingElement::one(ctx);
        let lhs = fox_expansion(ctx, &w);
        res.record(if lhs == rhs { Ok(()) } else { Err(format!("word {:?}", w)) });
    }
    for ctx in &groups {
        res.record(ChainComplex::build(ctx).map(|_| ()).map_err(|e| e.to_string()));
    }
    res.finish(start)
}

fn random_calc(rng: &mut Rng64, groups: &[GroupContext], max_q: usize) -> Option<QCalculus> {
    let ctx = pick(rng, groups);
    let quot = random::quotient(rng, ctx, max_q);
    let h = subgroup_context(ctx, &quot).ok()?;
    let rank = h.abelianization().rank;
    if rank == 0 {
        return None;
    }
    let irr = rng.gen_bool(0.3);
    let psi = random::character(rng, rank, irr);
    let sf = StructureFunctions::compute(ctx, &quot);
    QCalculus::with_subgroup(sf, h, psi).ok()
}

/// Each Q-value inequality on `count` random instances.
pub fn inequalities(count: usize, max_q: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("Q-value inequalities");
    let groups = raag_groups();
    let mut rng = random::rng(seed);
    let mut pool = Vec::new();
    while pool.len() < 12 {
        if let Some(c) = random_calc(&mut rng, &groups, max_q) {
            pool.push(c);
        }
    }
    for _ in 0..count {
        let calc = pool.choose(&mut rng).expect("non-empty");
        let sf = calc.structure();
        let (ctx, quot) = (sf.context(), sf.quotient());
        let x = random::kernel_element(&mut rng, ctx, quot, 3, 4);
        let y = random::kernel_element(&mut rng, ctx, quot, 3, 4);
        let z = sf.split(&random::element(&mut rng, ctx, 3, 4));
        let w = sf.split(&random::element(&mut rng, ctx, 3, 4));
        let q = rng.gen_range(0..quot.order());
        res.record(check_inequalities(calc, &x, &y, &z, &w, q));
    }
    res.finish(start)
}

/// For `ψ = φ|H`: `qval = φ ∘ reassemble` and `|ψ|_Q = 0`.
pub fn restricted_qvalues(count: usize, max_q: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("Q-values of restricted characters");
    let groups = raag_groups();
    let mut rng = random::rng(seed);
    for _ in 0..count {
        let ctx = pick(&mut rng, &groups);
        let quot = random::quotient(&mut rng, ctx, max_q);
        let irr = rng.gen_bool(0.5);
        let phi = random::character(&mut rng, ctx.abelianization().rank, irr);
        let outcome = QCalculus::restricted(ctx, &quot, &phi).map_err(|e| e.to_string()).and_then(|calc| {
            if !calc.qdefect().is_zero() {
                return Err(format!("defect {} for {phi}", calc.qdefect()));
            }
            for _ in 0..3 {
                let x = random::element(&mut rng, ctx, 4, 5);
                if calc.qvalue_g(&x).map_err(|e| e.to_string())? != x.valuation(&phi) {
                    return Err(format!("qval ≠ φ on {x} for {phi}"));
                }
            }
            Ok(())
        });
        res.record(outcome);
    }
    res.finish(start)
}

/// Monomials `h` with Q-value `> bound` (or `≤ bound` when `above` is
/// false), drawn from random words.
fn monomials_beyond(rng: &mut Rng64, calc: &QCalculus, bound: &Value, above: bool, terms: usize) -> RingElement {
    let ctx = calc.structure().context();
    let mut y = RingElement::zero(ctx);
    for _ in 0..200 {
        if y.len() >= terms {
            break;
        }
        let g = ctx.nf(random::word(rng, ctx.generators(), 6).letters());
        let v = calc.monomial_qvalue(&g).expect("word in G");
        if (&v > bound) == above && y.coeff(&g) == rat(0) {
            y.add_term(g, rat(rng.gen_range(1..=3)));
        }
    }
    y
}

/// Inversion of `x + y` on instances satisfying the margin hypothesis, and
/// rejection of instances violating it.
pub fn sum_inversion(good: usize, bad: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut res = SuiteResult::new("inversion of x + y");
    let groups = raag_groups();
    let mut rng = random::rng(seed);
    let (mut done_good, mut done_bad) = (0, 0);
    let mut attempts = 0;
    while (done_good < good || done_bad < bad) && attempts < 50 * (good + bad) {
        attempts += 1;
        let Some(calc) = random_calc(&mut rng, &groups, 8) else { continue };
        let sf = calc.structure();
        let ctx = sf.context();
        let g = ctx.nf(random::word(&mut rng, ctx.generators(), 4).letters());
        let x = sf.split(&RingElement::from_word(ctx, &g, rat(rng.gen_range(1..=3))));
        let v_inv = calc.monomial_qvalue(&ctx.inv_nf(&g)).expect("word in G");
        let bound = &calc.qdefect().scale_int(2) - &v_inv;
        let want_good = done_good < good && (done_bad >= bad || rng.gen_bool(0.7));
        let y = monomials_beyond(&mut rng, &calc, &bound, want_good, 3);
        if y.is_zero() {
            continue;
        }
        let margin = calc.qvalue_g(&y).expect("in G").add_value(&v_inv).add_value(&-&calc.qdefect().scale_int(2));
        let Valuation::Finite(m) = margin else { continue };
        let y = sf.split(&y);
        if want_good {
            if !m.is_positive() {
                continue;
            }
            let cutoff = &m.scale_int(5) + &Value::int(1);
            let out = calc.invert_sum(&x, &y, &cutoff).map_err(|e| e.to_string()).and_then(|inv| {
                let sum = &sf.reassemble(&x) + &sf.reassemble(&y);
                let one = RingElement::one(ctx);
                for r in [&one - &(&sum * &inv.z), &one - &(&inv.z * &sum)] {
                    if let Valuation::Finite(v) = calc.qvalue_g(&r).map_err(|e| e.to_string())? {
                        if v < cutoff {
                            return Err(format!("residual of Q-value {v} below {cutoff}"));
                        }
                    }
                }
                Ok(())
            });
            res.record(out);
            done_good += 1;
        } else {
            if m.is_positive() {
                continue;
            }
            let out = match calc.invert_sum(&x, &y, &Value::int(4)) {
                Err(QError::HypothesisViolation(_)) => Ok(()),
                other => Err(format!("expected a hypothesis violation, got {other:?}")),
            };
            res.record(out);
            done_bad += 1;
        }
    }
    if done_good < good || done_bad < bad {
        res.record(Err(format!("generated only {done_good} + {done_bad} instances")));
    }
    res.finish(start)
}

/// Certificates over the catalog: independent re-verification, stability
/// under doubling the cutoff, and scale invariance under `φ ↦ 3φ/2`.
/// With a fixed `cutoff` (no retries) certification may be inconclusive;
/// such samples are counted and re-run under the default policy.
pub fn certificates(samples: usize, seed: u64, cutoff: Option<&Value>) -> SuiteResult {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for entry in catalog() {
        let ctx = entry.context().expect("catalog parses");
        let cc = ChainComplex::build(&ctx).expect("valid complex");
        let mut rays: Vec<Character> = Vec::new();
        for phi in sample_rays(ctx.abelianization().rank, samples, seed) {
            if !rays.contains(&phi) && !rays.contains(&phi.neg()) {
                rays.push(phi);
            }
        }
        jobs.extend(rays.into_iter().map(|phi| (entry.name, cc.clone(), phi)));
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut parts: Vec<Option<SuiteResult>> = vec![None; jobs.len()];
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let done: Vec<Vec<(usize, SuiteResult)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some((name, cc, phi)) = jobs.get(i) else { break };
                        out.push((i, certify_ray(name, cc, phi, cutoff)));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    for (i, r) in done.into_iter().flatten() {
        parts[i] = Some(r);
    }
    let mut res = SuiteResult::new("certificate re-verification");
    for part in parts.into_iter().flatten() {
        res.passed += part.passed;
        res.failed += part.failed;
        res.inconclusive += part.inconclusive;
        if res.counterexample.is_none() {
            res.counterexample = part.counterexample;
        }
    }
    res.finish(start)
}

fn certify_ray(name: &str, cc: &ChainComplex, phi: &Character, cutoff: Option<&Value>) -> SuiteResult {
    let mut res = SuiteResult::new("certificate re-verification");
    let ctx = cc.context();
    let policy = match cutoff {
        Some(c) => CutoffPolicy { cutoff: Some(c.clone()), retries: 0 },
        None => CutoffPolicy::default(),
    };
    let v = match fibred_check(cc, phi, &policy) {
        Ok(v) => v,
        Err(e) => {
            res.record(Err(format!("{name}: {phi} failed to run: {e}")));
            return res;
        }
    };
    for (dir, outcome) in [(v.character.clone(), &v.plus), (v.character.neg(), &v.minus)] {
        let Some(cert) = outcome.certificate() else {
            if cutoff.is_some() && outcome.status() == DirectionStatus::InconclusiveAtCutoff {
                res.inconclusive += 1;
                let again = sikorav_certify(cc, &dir, &CutoffPolicy::default()).map(|o| o.status());
                res.record(match again {
                    Ok(_) => Ok(()),
                    Err(e) => Err(format!("{name}: rerun at {dir} failed: {e}")),
                });
            }
            continue;
        };
        let mut check = verify_certificate(ctx, cert).map_err(|e| format!("{name}: {dir}: {e}"));
        if check.is_ok() {
            let doubled = CutoffPolicy::fixed(cert.cutoff.scale_int(2));
            check = match sikorav_certify(cc, &dir, &doubled) {
                Ok(o) if o.status() == DirectionStatus::Certified => Ok(()),
                other => Err(format!("{name}: {dir} lost its certificate at doubled cutoff: {other:?}")),
            };
        }
        res.record(check);
    }
    let three_halves = crate::value::ratio(3, 2);
    for (dir, outcome) in [(v.character.clone(), &v.plus), (v.character.neg(), &v.minus)] {
        if cutoff.is_some() {
            break;
        }
        let b = sikorav_certify(cc, &dir.scale(&three_halves), &CutoffPolicy::default()).map(|o| o.status());
        let a = outcome.status();
        res.record(if b.as_ref() == Ok(&a) { Ok(()) } else { Err(format!("{name}: {dir} gives {a:?} but 3/2 of it gives {b:?}")) });
    }
    res
}
