use std::path::Path;
use std::process::{Command, Output};

fn omfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omfq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gegenbauer_value() {
    let o = omfq(&["gegenbauer", "--N", "2", "--s", "3", "--x", "2", "--y", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "6");
    let o = omfq(&["gegenbauer", "--N", "3", "--s", "1/2", "--x", "-1", "--y", "1/3"]);
    assert!(o.status.success());
}

#[test]
fn lift_then_pullback() {
    let dir = tempfile::tempdir().unwrap();
    let (phi, psi, p2) = (path(dir.path(), "phi"), path(dir.path(), "psi"), path(dir.path(), "p2"));
    assert!(omfq(&["classical", "--series", "phi10-1", "--prec", "5", "--out", &phi]).status.success());
    assert!(omfq(&["lift", "--input", &phi, "--bound", "4", "--out", &psi]).status.success());
    assert!(omfq(&["pullback", "--input", &psi, "--lambda", "0,0,1", "--order", "2", "--out", &p2]).status.success());
    let text = std::fs::read_to_string(&p2).unwrap();
    assert!(text.starts_with("omfq v1\nkind ortho\nweight 12\n"));
    // 20 tau(a) tau(b)
    for line in ["coeff 1 1 20", "coeff 1 2 -480", "coeff 2 2 11520", "coeff 3 1 5040"] {
        assert!(text.lines().any(|l| l == line), "missing {line:?}");
    }
}

#[test]
fn development_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let phi = path(dir.path(), "phi");
    assert!(omfq(&["classical", "--series", "phi10-1", "--prec", "3", "--out", &phi]).status.success());
    let o = omfq(&["devcoeff", "--input", &phi, "--order", "2", "--vectors", "1;1"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("coeff 1 20\ncoeff 2 -480\ncoeff 3 5040\n"));
    let o = omfq(&["devcoeff", "--input", &phi, "--order", "2", "--vectors", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (phi, psi) = (path(dir.path(), "phi"), path(dir.path(), "psi"));
    omfq(&["classical", "--series", "phi10-1", "--prec", "4", "--out", &phi]);
    omfq(&["lift", "--input", &phi, "--bound", "3", "--out", &psi]);
    let o = omfq(&["pullback", "--input", &psi, "--lambda", "1,0,0", "--order", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(omfq(&["pullback", "--input", &path(dir.path(), "missing"), "--lambda", "0,0,1", "--order", "1"]).status.code(), Some(2));
    std::fs::write(&phi, "omfq v1\nkind series\nweight 4\ncoeff 1 1\n").unwrap();
    let o = omfq(&["devcoeff", "--input", &phi, "--order", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(omfq(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_reports_the_example() {
    let o = omfq(&["verify", "--suite", "ex65"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("71 E4^2 E6 Delta^5"));
}

#[test]
fn output_is_deterministic() {
    let run = || stdout(&omfq(&["classical", "--series", "phi-2-1", "--prec", "6"]));
    let a = run();
    assert!(!a.is_empty());
    assert_eq!(a, run());
}
