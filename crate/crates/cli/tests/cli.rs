use std::path::{Path, PathBuf};
use std::process::Command;

use dgw_cli::document::DocError;
use dgw_cli::goldens::{build, NAMES};
use dgw_cli::report::{sha256_hex, verify_report, worst_exit, Report};
use dgw_cli::tasks::Detail;
use dgw_cli::{parse_document, run, RunOptions, VerifyError};
use dgw_core::checkers::{CheckReport, Conformance, TransportReport, Verdict};
use serde_json::Value;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(format!("{name}.dgw"))
}

fn dgw(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgw"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgw-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn round_trip_is_exact() {
    for name in NAMES {
        let ws = build(name).unwrap();
        let again = parse_document(&ws.to_text()).unwrap();
        assert_eq!(again, ws);
        assert_eq!(again.to_text(), ws.to_text());
    }
}

#[test]
fn syntax_errors_carry_a_location() {
    let err =
        parse_document("{\n  \"fields\": {\n    \"Q\": {\"base\": \"Q\"},,\n  }\n}").unwrap_err();
    match err {
        DocError::Syntax { line, col, .. } => assert_eq!((line, col), (3, 24)),
        other => panic!("{other:?}"),
    }
}

fn kronecker_text() -> String {
    std::fs::read_to_string(example("kronecker")).unwrap()
}

#[test]
fn undeclared_algebra_is_an_unknown_reference() {
    let text = kronecker_text().replace(
        "\"P1\": {\"algebra\": \"K\"",
        "\"P1\": {\"algebra\": \"Kr\"",
    );
    assert_ne!(text, kronecker_text());
    assert_eq!(
        parse_document(&text).unwrap_err(),
        DocError::UnknownReference("Kr".into())
    );
    let mut v: Value = serde_json::from_str(&kronecker_text()).unwrap();
    v["tasks"][0]["args"]["objects"][1] = "P3".into();
    assert_eq!(
        parse_document(&v.to_string()).unwrap_err(),
        DocError::UnknownReference("P3".into())
    );
}

#[test]
fn broken_associativity_names_the_triple() {
    let mut v: Value = serde_json::from_str(&kronecker_text()).unwrap();
    // alpha·alpha = e1 keeps the unit laws but (e1·alpha)·alpha = 0 ≠ e1·(alpha·alpha)
    v["algebras"]["K"]["mul"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!(["alpha", "alpha", [["e1", "1"]]]));
    match parse_document(&v.to_string()).unwrap_err() {
        DocError::Validation { entity, axiom } => {
            assert_eq!(entity, "algebras.K");
            assert_eq!(axiom, "Associativity fails at (e1, alpha, alpha)");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn field_cycles_are_rejected() {
    let doc = r#"{"fields": {"a": {"over": "b", "generator": "x", "minpoly": ["1", "0", "1"]},
                             "b": {"over": "a", "generator": "y", "minpoly": ["1", "0", "1"]}}}"#;
    match parse_document(doc).unwrap_err() {
        DocError::Validation { axiom, .. } => assert!(axiom.contains("cyclic")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn exit_code_contract() {
    let ausl = example("auslander");
    let kron = example("kronecker");
    assert_eq!(
        dgw(&["run", ausl.to_str().unwrap(), "--task", "check-triple"]).0,
        0
    );
    assert_eq!(
        dgw(&["run", ausl.to_str().unwrap(), "--task", "auslander-witness"]).0,
        1
    );
    assert_eq!(
        dgw(&["run", kron.to_str().unwrap(), "--task", "check-exc"]).0,
        0
    );
    let (code, out) = dgw(&[
        "run",
        kron.to_str().unwrap(),
        "--task",
        "check-exc",
        "--order",
        "reversed",
    ]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(
        dgw(&[
            "run",
            ausl.to_str().unwrap(),
            "--task",
            "check-triple",
            "--depth",
            "0"
        ])
        .0,
        2
    );
    assert_eq!(dgw(&["run", "/nonexistent.dgw"]).0, 3);
    let bad = tmp("bad.dgw");
    std::fs::write(&bad, "{\"algebras\": {\"A\": {\"field\": \"Q\"}}}").unwrap();
    assert_eq!(dgw(&["run", bad.to_str().unwrap()]).0, 3);
    for name in ["kronecker", "morita"] {
        assert_eq!(
            dgw(&["run", example(name).to_str().unwrap()]).0,
            0,
            "{name}"
        );
    }
}

#[test]
fn anomalies_dominate_the_exit_code() {
    let q = dgw_core::field::Field::rationals();
    let report = |verdict: Verdict| CheckReport {
        check: "check-triple".into(),
        field: q.to_string(),
        verdict,
        conditions: Vec::new(),
        certificate_hashes: Vec::new(),
    };
    let detail = Detail::Transport {
        report: TransportReport {
            base: report(Verdict::Pass),
            extended: report(Verdict::fail("x")),
            conformance: Conformance::Anomaly,
        },
    };
    assert_eq!(detail.exit_code(), 4);
    assert_eq!(worst_exit([0, 1, 2, 3, 4]), 4);
    assert_eq!(worst_exit([0, 2, 1]), 1);
    assert_eq!(worst_exit([2, 0]), 2);
    assert_eq!(worst_exit([1, 3]), 3);
}

fn fresh_report(name: &str, selector: &[&str]) -> (String, Report) {
    let text = std::fs::read_to_string(example(name)).unwrap();
    let ws = parse_document(&text).unwrap();
    let selector: Vec<String> = selector.iter().map(|s| s.to_string()).collect();
    let r = run(
        &ws,
        &sha256_hex(text.as_bytes()),
        &selector,
        &RunOptions::default(),
    );
    (r.to_json(), r)
}

#[test]
fn reports_are_deterministic() {
    for name in NAMES {
        assert_eq!(
            fresh_report(name, &[]).0,
            fresh_report(name, &[]).0,
            "{name}"
        );
    }
    let path = tmp("a.json");
    let p = path.to_str().unwrap();
    let first = dgw(&[
        "run",
        example("morita").to_str().unwrap(),
        "--report",
        p,
        "--format",
        "json",
    ]);
    let saved = std::fs::read_to_string(&path).unwrap();
    assert_eq!(first.1, saved);
    let second = dgw(&[
        "run",
        example("morita").to_str().unwrap(),
        "--report",
        p,
        "--format",
        "json",
    ]);
    assert_eq!(second.1, saved);
}

#[test]
fn fresh_reports_verify_with_their_own_exit_code() {
    for name in NAMES {
        let (json, r) = fresh_report(name, &[]);
        assert_eq!(verify_report(&json).unwrap().exit, r.summary.exit, "{name}");
    }
    let path = tmp("k.json");
    dgw(&[
        "run",
        example("kronecker").to_str().unwrap(),
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(dgw(&["verify", path.to_str().unwrap()]).0, 0);
}

fn redigest(v: &mut Value) -> String {
    let r: Report = serde_json::from_value(v.clone()).unwrap();
    let body = serde_json::json!({"format": r.format, "document_sha256": r.document_sha256, "options": r.options, "tasks": r.tasks, "summary": r.summary});
    let d = sha256_hex(serde_json::to_string(&body).unwrap().as_bytes());
    v["digest"] = d.clone().into();
    serde_json::to_string(v).unwrap()
}

#[test]
fn flipped_dimensions_are_tampering() {
    let (json, _) = fresh_report("auslander", &["auslander-triple"]);
    let mut v: Value = serde_json::from_str(&json).unwrap();
    let claims = &mut v["tasks"][0]["detail"]["report"]["conditions"][1]["claims"][0]["observed"];
    let (k, d) = claims
        .as_object()
        .unwrap()
        .iter()
        .next()
        .map(|(k, d)| (k.clone(), d.as_u64().unwrap()))
        .unwrap();
    claims[&k] = (d + 1).into();
    // caught by the digest
    assert!(matches!(
        verify_report(&serde_json::to_string(&v).unwrap()),
        Err(VerifyError::TamperedReport(_))
    ));
    // and, with a forged digest, by the verdict no longer following from the numbers
    let forged = redigest(&mut v);
    assert!(matches!(
        verify_report(&forged),
        Err(VerifyError::TamperedReport(_))
    ));
    // a forged total is caught the same way
    let (json, _) = fresh_report("auslander", &["auslander-triple"]);
    let mut v: Value = serde_json::from_str(&json).unwrap();
    v["tasks"][0]["detail"]["report"]["conditions"][3]["values"]["total"] = 4.into();
    assert!(matches!(
        verify_report(&redigest(&mut v)),
        Err(VerifyError::TamperedReport(_))
    ));
}

#[test]
fn corrupted_certificate_steps_fail_verification() {
    let (json, r) = fresh_report("kronecker", &["full-pair"]);
    assert_eq!(r.summary.exit, 0);
    assert_eq!(r.certificates.len(), 1);
    let mut v: Value = serde_json::from_str(&json).unwrap();
    v["certificates"][0]["document"]["certificates"]["split"]["steps"][0]["sum"][1] = "P1".into();
    let out = verify_report(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(out.exit, 1, "{:?}", out.notes);
    // a certificate that still replays but differs from the recorded one is tampering
    let mut v: Value = serde_json::from_str(&json).unwrap();
    let steps = v["certificates"][0]["document"]["certificates"]["split"]["steps"]
        .as_array_mut()
        .unwrap();
    steps.push(serde_json::json!({"name": "extra", "shift": {"of": "P1", "by": 1}}));
    assert!(matches!(
        verify_report(&serde_json::to_string(&v).unwrap()),
        Err(VerifyError::TamperedReport(_))
    ));
    let path = tmp("corrupt.json");
    let mut v: Value = serde_json::from_str(&json).unwrap();
    v["certificates"][0]["document"]["certificates"]["split"]["claim"]["matrix"][1][2] =
        serde_json::json!([]);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(dgw(&["verify", path.to_str().unwrap()]).0, 1);
}

#[test]
fn print_is_canonical() {
    for name in NAMES {
        let (code, out) = dgw(&["print", example(name).to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(out, std::fs::read_to_string(example(name)).unwrap());
    }
}
