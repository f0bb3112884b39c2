use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qrecon_core::report::{Status, VerificationReport};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn qrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrecon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> (VerificationReport, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = qrecon(&all);
    (VerificationReport::from_json(&stdout(&o)).expect("json report"), o.status.code().unwrap())
}

#[test]
fn two_bit_text_matches_golden() {
    let o = qrecon(&["verify", fixture("two_bit.json").to_str().unwrap()]);
    assert_eq!(stdout(&o), golden("two_bit.txt"));
}

#[test]
fn two_bit_json_matches_golden() {
    let o = qrecon(&["verify", "--format", "json", fixture("two_bit.json").to_str().unwrap()]);
    assert_eq!(stdout(&o), golden("two_bit.json"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let path = fixture("two_bit.json");
    for format in ["text", "json"] {
        let args = ["--format", format, "verify", path.to_str().unwrap()];
        let a = qrecon(&args);
        let b = qrecon(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn demo_matches_shipped_fixture() {
    let a = qrecon(&["demo", "two-bit"]);
    let b = qrecon(&["verify", fixture("two_bit.json").to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_round_trips() {
    let o = qrecon(&["verify", "--format", "json", fixture("two_bit.json").to_str().unwrap()]);
    let text = stdout(&o);
    let report = VerificationReport::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
}

#[test]
fn one_text_line_per_check() {
    let (report, _) = json_report(&["verify", fixture("two_bit.json").to_str().unwrap()]);
    let text = stdout(&qrecon(&["verify", fixture("two_bit.json").to_str().unwrap()]));
    for c in &report.checks {
        let lines: Vec<&str> = text.lines().filter(|l| l.split_whitespace().nth(1) == Some(c.id.as_str())).collect();
        assert_eq!(lines.len(), 1, "{}", c.id);
        assert!(lines[0].starts_with(c.status.word()));
        assert!(lines[0].contains(&format!("[{}]", c.anchor)));
    }
}

#[test]
fn corrupted_fixture_reports_permissibility_witness() {
    let (report, code) = json_report(&["verify", fixture("corrupted_two_bit.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let c = report.check("permissible[parity_break]").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert_eq!(c.anchor, "def:permissible");
    for key in ["k", "k_word", "phi1", "phi2"] {
        assert!(c.witness.contains_key(key), "{key}");
    }
    assert_eq!(report.check("induced_group[parity_break]").unwrap().status, Status::Skipped);
}

#[test]
fn minimal_document_passes() {
    let (report, code) = json_report(&["verify", fixture("minimal.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["group.axioms", "group.orbit_stabilizer"]);
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ \"schema_version\": ").unwrap();
    let undefined = dir.path().join("undefined.json");
    let text = std::fs::read_to_string(fixture("two_bit.json")).unwrap().replace("\"xi\", \"k\"", "\"zeta\", \"k\"");
    std::fs::write(&undefined, text).unwrap();
    let two_bit = fixture("two_bit.json");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["verify", broken.to_str().unwrap()], "parse error at line"),
        (vec!["verify", undefined.to_str().unwrap()], "undefined variable `zeta`"),
        (vec!["verify", "/nonexistent/doc.json"], "cannot read"),
        (vec!["pair", two_bit.to_str().unwrap(), "--pair", "5"], "out of range"),
        (vec!["operator", two_bit.to_str().unwrap(), "--variable", "nope"], "no variable"),
        (vec!["spin", "--r", "1/3"], ""),
        (vec!["--tolerance", "2", "verify", two_bit.to_str().unwrap()], "--tolerance"),
    ];
    for (args, message) in cases {
        let o = qrecon(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(message), "{args:?}");
    }
}

#[test]
fn spin_verb() {
    let (report, code) = json_report(&["spin", "--r", "5/2"]);
    assert_eq!(code, 0);
    assert_eq!(report.checks.len(), 4);
    assert!(report.check("spin[5/2].full_turn").unwrap().residual.unwrap() <= 1e-10);
}

#[test]
fn pair_and_operator_verbs() {
    let two_bit = fixture("two_bit.json");
    let (report, _) = json_report(&["pair", two_bit.to_str().unwrap(), "--pair", "0"]);
    assert!(report.check("pair[0].joint_irreducible").is_some());
    let (report, code) = json_report(&["operator", two_bit.to_str().unwrap(), "--variable", "theta"]);
    assert!(report.check("permissible[xi]").is_none());
    assert_eq!(report.check("operator[theta].resolution").unwrap().status, Status::Pass);
    assert!(report.operators.iter().any(|o| o.source == "single" && o.name == "theta"));
    assert_eq!(code, report.exit_code());
}

#[test]
fn tolerance_override_is_stamped() {
    let (report, _) = json_report(&["--tolerance", "1e-6", "--max-order", "64", "demo", "two-bit"]);
    assert_eq!(report.environment.tolerance, 1e-6);
    assert_eq!(report.environment.max_order, 64);
    assert_eq!(report.environment.seeds, "none");
}
