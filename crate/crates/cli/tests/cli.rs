use std::process::{Command, Output};

const ALG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../algebras");

fn omega(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega")).args(args).output().expect("binary runs")
}

fn alg(name: &str) -> String {
    format!("{ALG}/{name}")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn prime_negative_exits_one() {
    let o = omega(&["prime", &alg("a1.alg")]);
    assert_eq!(stdout(&o).trim(), "not prime");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn id_equal_positive_exits_zero() {
    let o = omega(&["id-equal", &alg("a1.alg"), &alg("a2.alg")]);
    assert_eq!(stdout(&o).trim(), "equal");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn named_algebra_selection() {
    let o = omega(&["critical", &format!("{}:Lp", alg("heisenberg.alg"))]);
    assert_eq!(stdout(&o).trim(), "not critical");
    assert_eq!(o.status.code(), Some(1));
    let o = omega(&["critical", &format!("{}:L", alg("heisenberg.alg"))]);
    assert_eq!(stdout(&o).trim(), "critical");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn monolith_and_annihilator() {
    let o = omega(&["monolith", &alg("sl2.alg")]);
    assert_eq!(stdout(&o).trim(), "monolith span{h}");
    let o = omega(&["annihilator", &format!("{}:L", alg("heisenberg.alg"))]);
    assert_eq!(stdout(&o).trim(), "annihilator span{z}");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_paper_passes() {
    let o = omega(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed, 0 undecided, 0 violations"));
}

#[test]
fn json_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (p, threads) in [(&p1, "1"), (&p2, "4")] {
        let o = omega(&["verify-main-prime", "--ring", "Z/2", "--shape", "2,2", "--threads", threads, "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read_to_string(&p1).unwrap(), std::fs::read_to_string(&p2).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "omega-report/1");
    assert_eq!(v["command"], "verify-main-prime");
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["status"] == "pass"));
}

#[test]
fn enumerate_lists_classes() {
    let o = omega(&["enumerate", "--ring", "Z/2", "--shape", "2", "--classify", "prime"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("2 raw tables, 2 listed"));
    assert!(out.contains("prime=true") && out.contains("prime=false"));
}

#[test]
fn check_runs_directives() {
    let o = omega(&["check", &alg("example4.alg")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn failing_directive_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.alg");
    std::fs::write(&p, "ring Z/3\nsignature { mul : 2 }\nalgebra A { basis x ; mul(x,x) = x }\nexpect prime(A) = false\n").unwrap();
    let o = omega(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(omega(&["bogus"]).status.code(), Some(64));
    assert_eq!(omega(&["prime"]).status.code(), Some(64));
    assert_eq!(omega(&["enumerate", "--ring", "Z/2", "--shape", "3"]).status.code(), Some(64));
    assert_eq!(omega(&["annihilator", &alg("sl2.alg"), "--of", "q"]).status.code(), Some(64));
    assert_eq!(omega(&["--help"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_65() {
    assert_eq!(omega(&["prime", "/nonexistent/x.alg"]).status.code(), Some(65));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.alg");
    std::fs::write(&p, "ring Z/2\nsignature { mul : 2 }\nalgebra A { basis x ; mul(x,y) = x }\n").unwrap();
    let o = omega(&["prime", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 3:"));
    assert_eq!(omega(&["prime", &format!("{}:Nope", alg("sl2.alg"))]).status.code(), Some(65));
}

#[test]
fn caps_report_undecided() {
    let o = omega(&["critical", &format!("{}:Lp", alg("heisenberg.alg")), "--max-sections", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}
