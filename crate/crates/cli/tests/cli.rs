use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ata")).args(args).output().expect("binary runs")
}

fn with_fixtures(args: &[&str]) -> Output {
    let owned: Vec<String> = args
        .iter()
        .map(|a| if a.contains('.') && !a.starts_with('-') { fixture(a).display().to_string() } else { a.to_string() })
        .collect();
    let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    ata(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn member_exit_codes() {
    assert_eq!(with_fixtures(&["member", "ex1.ata", "two-apart.word"]).status.code(), Some(1));
    let o = with_fixtures(&["member", "ex1.ata", "close.word"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "accepted");
}

#[test]
fn empty_prints_a_witness() {
    let o = with_fixtures(&["empty", "ex1.ata"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("nonempty\nwitness:"), "{}", stdout(&o));
}

#[test]
fn universal_and_contains() {
    let o = with_fixtures(&["universal", "ex1.ata"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: a@"));
    assert_eq!(with_fixtures(&["universal", "all.ata"]).status.code(), Some(0));
    assert_eq!(with_fixtures(&["contains", "ex1.ata", "ex1.ata"]).status.code(), Some(0));
    assert_eq!(with_fixtures(&["contains", "ex1.ata", "all.ata"]).status.code(), Some(0));
    assert_eq!(with_fixtures(&["contains", "all.ata", "ex1.ata"]).status.code(), Some(1));
}

#[test]
fn json_report_fields() {
    let o = with_fixtures(&["empty", "ex1.ata", "--report", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for field in ["verdict", "witness", "region_path", "nodes_expanded", "nodes_pruned", "elapsed_ms"] {
        assert!(v.get(field).is_some(), "missing {field}: {v}");
    }
    assert_eq!(v["verdict"], "nonempty");
}

#[test]
fn input_errors_exit_2() {
    let o = with_fixtures(&["empty", "overlap.ata"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4:3"), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(with_fixtures(&["member", "ex1.ata", "missing.word"]).status.code(), Some(2));
    assert_eq!(ata(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(with_fixtures(&["empty", "ex1.ata", "--budget", "-1"]).status.code(), Some(2));
}

#[test]
fn gen_lcs_writes_a_parsable_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.ata");
    let o = with_fixtures(&["gen-lcs", "write-read.lcs", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ata(&["empty", out.to_str().unwrap(), "--budget", "60"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let witness = text.lines().find_map(|l| l.strip_prefix("witness: ")).unwrap();
    let word = dir.path().join("w.word");
    std::fs::write(&word, witness).unwrap();
    let o = ata(&["validate-encoding", fixture("write-read.lcs").to_str().unwrap(), word.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = with_fixtures(&["gen-lcs", "unreachable.lcs", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(ata(&["empty", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn validate_encoding_reports_conditions() {
    let lcs = fixture("write-read.lcs");
    let o = with_fixtures(&["validate-encoding", "write-read.lcs", "enc.word"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("P1"), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.word");
    std::fs::write(&good, "q2@0 q1.read.a.q2@1/2 b@3/4 q1@1 q1.write.b.q1@11/8 b@7/4 a@15/8 q1@2 q0.write.a.q1@39/16 a@23/8 q0@3").unwrap();
    let o = ata(&["validate-encoding", lcs.to_str().unwrap(), good.to_str().unwrap(), "--report", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "ok");
}
