//! Acceptance run: one PASS/FAIL line per criterion, each under its time
//! budget. Run with `cargo test --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use novikov_core::chain::ChainComplex;
use novikov_core::characters::Character;
use novikov_core::fibring::catalog::{consistency_harness, find, sample_rays};
use novikov_core::fibring::{betti1_abelian, fibred_check, Combined, CutoffPolicy, DirectionStatus};
use novikov_core::suites::{self, SuiteResult};
use novikov_core::value::Rational;

const SEED: u64 = 0x5eed;

struct Outcome {
    id: usize,
    title: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn run(id: usize, title: &'static str, budget_s: u64, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let (ok, detail) = match r {
        Ok(d) => (elapsed < budget, d),
        Err(d) => (false, d),
    };
    let o = Outcome { id, title, ok, detail, elapsed, budget };
    println!(
        "criterion {} {:<34} {} ({:.2?} of {:?}) {}",
        o.id,
        o.title,
        if o.ok { "PASS" } else { "FAIL" },
        o.elapsed,
        o.budget,
        o.detail
    );
    o
}

fn suite(r: SuiteResult, min: usize) -> Result<String, String> {
    if r.failed > 0 {
        return Err(format!("{}: {} failed, first: {}", r.name, r.failed, r.counterexample.unwrap_or_default()));
    }
    if r.passed < min {
        return Err(format!("{}: only {} of {min} instances ran", r.name, r.passed));
    }
    Ok(format!("{}: {} passed", r.name, r.passed))
}

fn both(a: Result<String, String>, b: Result<String, String>) -> Result<String, String> {
    Ok(format!("{}; {}", a?, b?))
}

fn catalog_equivalence() -> Result<String, String> {
    let policy = CutoffPolicy::default();
    let check = |name: &str, phi: &[i64], want: Combined| -> Result<(), String> {
        let e = find(name).ok_or(format!("{name} missing"))?;
        let cc = ChainComplex::build(&e.context().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let v = fibred_check(&cc, &Character::integral(phi), &policy).map_err(|e| e.to_string())?;
        if v.verdict != want {
            return Err(format!("{name} at {phi:?}: {:?}", v.verdict));
        }
        Ok(())
    };
    check("Z", &[1], Combined::Fibred)?;
    check("Z", &[-1], Combined::Fibred)?;
    // F2xZ is the path a - z - b.
    check("F2xZ", &[0, 1, 0], Combined::Fibred)?;

    for (name, samples, want) in [("Z2", 8, Some(Combined::Fibred)), ("F2", 16, Some(Combined::NotFibredByRank))] {
        let e = find(name).unwrap();
        let r = consistency_harness(&e, samples, SEED, &policy).map_err(|e| e.to_string())?;
        if !r.pass || r.scan.entries.len() != samples {
            return Err(format!("{name}: harness failed {:?}", r.disagreements));
        }
        if let Some(w) = want {
            if r.scan.count(w) != samples {
                return Err(format!("{name}: {} of {samples} {}", r.scan.count(w), w.name()));
            }
        }
    }
    if !find("F2").unwrap().known_betti1.eq(&Rational::from_integer(1.into())) {
        return Err("F2 catalog betti number".into());
    }

    // Baumslag-Solitar: one-sided certificate, never Fibred.
    let mut bs = Vec::new();
    for name in ["BS12", "BS12-inverted"] {
        let e = find(name).unwrap();
        let cc = ChainComplex::build(&e.context().unwrap()).unwrap();
        let v = fibred_check(&cc, &Character::integral(&[1]), &policy).map_err(|e| e.to_string())?;
        if v.verdict == Combined::Fibred {
            return Err(format!("{name} reported Fibred"));
        }
        let plus = v.plus.status() == DirectionStatus::Certified;
        let minus = v.minus.status() == DirectionStatus::Certified;
        if plus == minus {
            return Err(format!("{name}: expected exactly one certified side, got {:?}/{:?}", v.plus.status(), v.minus.status()));
        }
        bs.push(format!("{name} φ(t)=1 certified on {}", if plus { "+" } else { "-" }));
    }

    for name in ["Z", "Z2", "Z3"] {
        let cc = ChainComplex::build(&find(name).unwrap().context().unwrap()).unwrap();
        let b = betti1_abelian(&cc).map_err(|e| e.to_string())?;
        if b != Rational::from_integer(0.into()) {
            return Err(format!("betti1 of {name} = {b}"));
        }
    }

    let mut audited = 0;
    for e in novikov_core::fibring::catalog() {
        let r = consistency_harness(&e, 16, SEED, &policy).map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!("{}: {:?}", e.name, r.disagreements));
        }
        audited += r.scan.entries.len();
    }
    Ok(format!("{audited} samples agree with oracles; {}", bs.join(", ")))
}

#[test]
fn acceptance() {
    let _ = sample_rays(1, 1, 0);
    let outcomes = vec![
        run(1, "structure-function identities", 10, || suite(suites::structure_functions(60, 12, SEED, false), 50)),
        run(2, "s-isomorphism", 5, || suite(suites::s_isomorphism(200, SEED), 200)),
        run(3, "valuation laws", 5, || suite(suites::valuation_laws(500, SEED), 500)),
        run(4, "Novikov inversion", 10, || {
            both(suite(suites::novikov_inversion(100, SEED, 20, None), 100), suites::scalar_witness().map(|_| "scalar witness exact".into()))
        }),
        run(5, "Fox identity", 5, || suite(suites::fox_identity(500, SEED), 500)),
        run(6, "Q-value inequalities", 20, || {
            both(suite(suites::inequalities(500, 8, SEED), 500), suite(suites::restricted_qvalues(100, 12, SEED), 100))
        }),
        run(7, "inversion of x + y", 20, || suite(suites::sum_inversion(50, 20, SEED), 70)),
        run(8, "catalog equivalence", 60, catalog_equivalence),
        run(9, "certificate soundness/stability", 30, || suite(suites::certificates(16, SEED, None), 1)),
    ];
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
