//! The `elastica` binary end to end: exit codes, run directories, diagnosis.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use elastica_cli::output::{read_diagnostics, read_snapshot, write_diagnostics, DIAGNOSTICS_FILE};

fn elastica(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastica"))
        .args(args)
        .env("ELASTICA_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_reports_validation_outcomes() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = write(tmp.path(), "ok.cfg", "initial.kind = semicircle\n");
    let o = elastica(&["check", &ok]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let bad = write(tmp.path(), "bad.cfg", "boundary.tau0 = 1, 0\n");
    let o = elastica(&["check", "--config", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("tangent at endpoint 0"));

    let typo = write(tmp.path(), "typo.cfg", "flow.dtt = 1e-5\n");
    let o = elastica(&["check", &typo]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("typo.cfg:1"));

    let o = elastica(&["check", "--length-projection", "sometimes"]);
    assert_eq!(code(&o), 2);
    let o = elastica(&["check", "--dt=-1"]);
    assert_eq!(code(&o), 3);
    let o = elastica(&["check", &tmp.path().join("missing.cfg").display().to_string()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn run_writes_a_self_describing_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let cfg = write(
        tmp.path(),
        "run.cfg",
        "initial.kind = perturbed_arc\ninitial.amp = 0.1\nflow.max_steps = 30\nflow.save_every = 10\n",
    );
    let o = elastica(&["run", &cfg, "--output", out.to_str().unwrap(), "--n-nodes", "101"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("step limit reached after 30 steps"));
    for f in ["config.echo", DIAGNOSTICS_FILE, "snapshot_0.csv", "snapshot_10.csv", "snapshot_30.csv", "initial.svg", "final.svg"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let echo = fs::read_to_string(out.join("config.echo")).unwrap();
    assert!(echo.contains("flow.n_nodes = 101"));
    assert_eq!(read_diagnostics(&out.join(DIAGNOSTICS_FILE)).unwrap().len(), 31);
    assert_eq!(read_snapshot(&out.join("snapshot_30.csv")).unwrap().nodes.len(), 202);

    let o = elastica(&["diagnose", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    // a tampered record must be caught
    let path = out.join(DIAGNOSTICS_FILE);
    let mut recs = read_diagnostics(&path).unwrap();
    recs[5].lambda_bound_lhs = 2.0 * recs[5].lambda_bound_rhs + 1.0;
    write_diagnostics(&recs, &path).unwrap();
    let o = elastica(&["diagnose", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL multiplier bound"));
}

#[test]
fn saved_snapshot_restarts_a_run() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let o = elastica(&["run", "--output", first.to_str().unwrap(), "--n-nodes", "201", "--t-end", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = write(
        tmp.path(),
        "again.cfg",
        "initial.kind = from_file\ninitial.path = first/snapshot_0.csv\nboundary.p0 = -1, 0\nboundary.p1 = 1, 0\n\
         boundary.tau0 = 0, 1\nboundary.tau1 = 0, -1\nboundary.ell = 3.141592653589793\nflow.n_nodes = 201\n",
    );
    let o = elastica(&["check", &cfg]);
    assert_eq!(code(&o), 0, "{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
    let o = elastica(&["run", &cfg, "--output", tmp.path().join("second").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    // the unit semicircle is already an elastica
    assert!(String::from_utf8_lossy(&o.stdout).contains("residual below threshold after 0 steps"));
}
