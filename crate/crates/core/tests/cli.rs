use std::process::Command;

use serde_json::Value;

fn modpll(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_modpll"))
        .args(args)
        .output()
        .unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

#[test]
fn exit_codes() {
    assert_eq!(
        modpll(&["reduce", "--p", "5", "--k", "4", "--ap", "5"]).0,
        0
    );
    assert_eq!(
        modpll(&["reduce", "--p", "5", "--k", "12", "--ap", "5"]).0,
        2
    );
    assert_eq!(
        modpll(&["reduce", "--p", "5", "--k", "7", "--ap", "5", "--val-only"]).0,
        3
    );
    assert_eq!(
        modpll(&[
            "canonicalize",
            "--kind",
            "ind-omega2",
            "--p",
            "5",
            "--h",
            "6"
        ])
        .0,
        2
    );
    assert_eq!(
        modpll(&["reduce", "--p", "6", "--k", "4", "--ap", "5"]).0,
        2
    );
    // unparseable flags are rejected by the argument parser
    assert_eq!(modpll(&["reduce", "--p", "five"]).0, 2);
}

#[test]
fn reduce_reports_case_and_schema() {
    let (code, v) = modpll(&["reduce", "--p", "5", "--k", "7", "--ap", "[[2,1]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "modpll/reduction/v1");
    assert_eq!(v["case"], "2b");
    let (_, v) = modpll(&["reduce", "--p", "5", "--k", "8", "--ap", "15"]);
    assert_eq!(v["case"], "3b");
    assert_eq!(v["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn correspondence_pipes_into_itself() {
    let (code, out) = modpll(&[
        "correspond",
        "--dir",
        "g2p",
        "--p",
        "5",
        "--input",
        r#"{"kind":"irred","r":1,"chi":"1"}"#,
    ]);
    assert_eq!(code, 0);
    let text = out.to_string();
    let (code, back) = modpll(&["correspond", "--dir", "p2g", "--p", "5", "--input", &text]);
    assert_eq!(code, 0);
    assert_eq!(back["galois"], out["galois"]);
    let (code, err) = modpll(&[
        "correspond",
        "--dir",
        "p2g",
        "--p",
        "5",
        "--input",
        r#"[{"kind":"one_dim","chi":"1"}]"#,
    ]);
    assert_eq!(code, 2);
    assert_eq!(err["error"], "NotInImage");
}

#[test]
fn check_is_byte_stable() {
    let args = [
        "check",
        "--suite",
        "series,reps",
        "--p",
        "2",
        "--samples",
        "10",
        "--seed",
        "3",
    ];
    let a = Command::new(env!("CARGO_BIN_EXE_modpll"))
        .args(args)
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_modpll"))
        .args(args)
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
