use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_multstrat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes() {
    let (code, out) = run(&["mult", "-"], "field Q\nvars x y\nideal x^2 - y^3\n");
    assert_eq!(code, 0);
    assert!(out.contains("multiplicity: 2"));
    let (code, out) = run(&["mult", "-"], "vars x\nideal w\n");
    assert_eq!(code, 2);
    assert!(out.contains("line 2, column 7"));
    let (code, _) = run(&["verify", "th57", "-"], "field Q\nvars x y z\nideal x^2 - y^2*z\ncover base y z\ng_b y^2 + y^3\n");
    assert_eq!(code, 1);
}

#[test]
fn json_report_has_schema_and_no_timings() {
    let (code, out) = run(&["--json", "verify", "dade", "-"], "field GF(7)\nvars x y z\nideal x^2 - y^2*z\ncenter origin\n");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "multstrat.report/1");
    assert_eq!(v["verdicts"][0]["status"], "PASS");
    assert!(v.get("elapsed").is_none());
}

#[test]
fn field_override_and_modulus_flag() {
    let text = "field Q\nvars x y\nideal x^2 + y^2\n";
    let (_, out) = run(&["--json", "--field", "GF(2)", "cone-stratum", "-"], text);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["stratum"], "V(x + y)");
    let (code, _) = run(&["--q", "5", "mult", "-"], "field GF(7)\nvars x\nideal x^2\n");
    assert_eq!(code, 2);
}
