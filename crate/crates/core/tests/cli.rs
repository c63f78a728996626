//! The `novikov` binary end to end: outputs, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value as Json;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_novikov"))
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("novikov-it-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, Output) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), out)
}

fn json(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn abelianize_examples() {
    let cases = [
        ("f2.pres", "raag { a, b; }", 2, vec![]),
        ("k.pres", "pres { a, b | a b a b }", 1, vec![2]),
        ("path.pres", "raag { a, b, c; a-b, b-c }", 3, vec![]),
    ];
    for (name, src, rank, torsion) in cases {
        let p = fixture(name, src);
        let (code, out) = run(&["abelianize", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rank"], rank, "{src}");
        assert_eq!(v["torsion"], serde_json::json!(torsion), "{src}");
        assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let p = fixture("bad.pres", "raag { a, b;\n  a-c }");
    let (code, out) = run(&["abelianize", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2") && err.contains('c'), "{err}");
    let (code, _) = run(&["abelianize", "/nonexistent/file.pres"]);
    assert_eq!(code, 2);
    // relators without a normal form engine: fine for abelianize, rejected for certify
    let k = fixture("k2.pres", "pres { a, b | a b a b }");
    let (code, _) = run(&["certify", k.to_str().unwrap(), "--phi", "1"]);
    assert_eq!(code, 3);
}

#[test]
fn certify_exit_codes() {
    let z = fixture("z.pres", "raag { t; }");
    let (code, out) = run(&["certify", z.to_str().unwrap(), "--phi", "1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "Fibred");
    assert!(v["certificate_digest"].is_string());

    let chi = fixture("chi.json", &novikov_core::characters::Character::integral(&[-1]).to_json().to_string());
    let (code, out) = run(&["certify", z.to_str().unwrap(), "--character", chi.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["inputs"].as_array().unwrap().len(), 2);

    let f2 = fixture("f2c.pres", "raag { a, b; }");
    for phi in ["1,0", "2,-3", "1/2,1"] {
        let (code, out) = run(&["certify", f2.to_str().unwrap(), "--phi", phi]);
        assert_eq!(code, 10, "{phi}");
        assert_eq!(json(&out)["verdict"], "NotFibredByRank");
    }

    let bs = fixture("bs.pres", novikov_core::fibring::catalog::BS12);
    let (code, out) = run(&["certify", bs.to_str().unwrap(), "--phi", "1"]);
    assert!(code == 10 || code == 11, "{code}");
    let v = json(&out);
    let certified = ["plus", "minus"].iter().filter(|s| v[**s]["status"] == "Certified").count();
    assert_eq!(certified, 1);
}

#[test]
fn scans() {
    let z2 = fixture("z2.pres", "raag { a, b; a-b }");
    let (code, out) = run(&["scan", z2.to_str().unwrap(), "--samples", "8", "--seed", "9"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["samples"].as_u64(), v["fibred"].as_u64()), (Some(8), Some(8)));
    let (_, again) = run(&["scan", z2.to_str().unwrap(), "--samples", "8", "--seed", "9"]);
    assert_eq!(out.stdout, again.stdout);

    let (code, out) = run(&["scan", z2.to_str().unwrap(), "--grid", "0"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["entries"], serde_json::json!([]));

    // F2 x Z as the path a - z - b: a living subgraph is connected and
    // dominating exactly when it contains z.
    let fz = fixture("f2z.pres", "raag { a, z, b; a-z, z-b }");
    let (code, out) = run(&["scan", fz.to_str().unwrap(), "--grid", "1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 26);
    for e in entries {
        let phi = novikov_core::characters::Character::from_json(&e["character"].to_string()).unwrap();
        let coords = phi.as_integral().unwrap();
        assert_eq!(e["verdict"] == "Fibred", coords[1] != 0, "{coords:?}: {}", e["verdict"]);
    }
}

#[test]
fn output_file_and_text_format() {
    let z = fixture("zo.pres", "raag { t; }");
    let dest = z.with_extension("json");
    let (code, out) = run(&["certify", z.to_str().unwrap(), "--phi", "1", "--out", dest.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.stdout.is_empty());
    let v: Json = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["verdict"], "Fibred");
    let (_, out) = run(&["certify", z.to_str().unwrap(), "--phi", "1", "--format", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict Fibred"));
}

#[test]
fn selftest_modes() {
    let (code, out) = run(&["selftest"]);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["pass"], true);

    let (code, out) = run(&["selftest", "--cutoff", "1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let inversion = v["suites"].as_array().unwrap().iter().find(|s| s["suite"] == "Novikov inversion").unwrap();
    assert!(inversion["inconclusive"].as_u64().unwrap() > 0);
    assert_eq!(inversion["failed"], 0);

    let (code, out) = run(&["selftest", "--corrupt-fixture"]);
    assert_eq!(code, 1);
    let v = json(&out);
    let sf = &v["suites"][0];
    assert_eq!(sf["suite"], "structure functions");
    assert!(sf["failed"].as_u64().unwrap() > 0);
    assert!(sf["counterexample"].is_string());
}
