use std::path::PathBuf;
use std::process::{Command, Output};

use arrfac::{parse_arrangement_file, Arrangement, Certificate, Session};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(format!("{name}.json")).display().to_string()
}

fn arr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arr")).args(args).env_remove("ARR_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn load(name: &str) -> Arrangement {
    Arrangement::from_source(&parse_arrangement_file(&std::fs::read(corpus(name)).unwrap()).unwrap()).unwrap()
}

#[test]
fn table_1_golden() {
    let o = arr(&["table", &corpus("ot454"), "--order", "1,2,3,4,5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("table1.txt"));
}

#[test]
fn table_2_golden() {
    let o = arr(&["table", &corpus("d13"), "--seed", &corpus("d21xphi1"), "--order", "4,5,6,7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("table2.txt"));
}

#[test]
fn table_3_golden() {
    let o = arr(&["table", &corpus("notheredfactored"), "--order", "1,2,3,4,5,6,7,8,9,10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("table3.txt"));
}

#[test]
fn table_order_defaults_to_file_order() {
    let o = arr(&["table", &corpus("ot454")]);
    assert_eq!(stdout(&o), golden("table1.txt"));
}

#[test]
fn poincare_factored() {
    let o = arr(&["poincare", &corpus("ot454")]);
    assert_eq!(stdout(&o).trim(), "(1+t)(1+2t)^2");
    let o = arr(&["poincare", &corpus("notfactored")]);
    assert_eq!(stdout(&o).trim(), "1+4t+6t^2+3t^3");
}

#[test]
fn b2_pair_is_not_nice() {
    let o = arr(&["check", "nice", &corpus("a222"), "--partition", "1,3|2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("nice: false\n"), "{out}");
    assert!(out.contains("witness: flat {1,2,3,4}"), "{out}");
}

#[test]
fn json_certificates_reverify() {
    let session = Session::default();
    let cases: &[(&str, &[&str])] = &[
        ("a222", &["check", "nice", "--partition", "1,3|2,4"]),
        ("a222", &["check", "independent", "--partition", "1|2,3,4"]),
        ("ot454", &["check", "nice"]),
        ("ot454", &["check", "supersolvable"]),
        ("d13", &["check", "supersolvable"]),
        ("d13", &["check", "ind-free"]),
        ("d13", &["check", "ind-factored"]),
        ("d13", &["check", "ind-factored", "--partition", "1|2,3,6|4,5,7"]),
        ("g333", &["check", "ind-free"]),
        ("g333hat", &["check", "ind-factored", "--partition", "1,2,4,5,10|7|3,6,8,9"]),
        ("notfactored", &["check", "hereditary"]),
        ("notheredfactored", &["check", "hereditary"]),
        ("ot454", &["check", "hereditary", "--of", "ind-factored"]),
    ];
    for (name, args) in cases {
        let file = corpus(name);
        let mut argv: Vec<&str> = vec![args[0], args[1], &file, "--json"];
        argv.extend_from_slice(&args[2..]);
        let o = arr(&argv);
        assert!(o.status.success(), "{argv:?}");
        let cert: Certificate = serde_json::from_slice(&o.stdout).unwrap();
        assert!(session.verify(&load(name), &cert).unwrap(), "{argv:?} does not re-verify");
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let session = Session::default();
    let o = arr(&["check", "ind-free", &corpus("ot454"), "--json"]);
    let mut cert: Certificate = serde_json::from_slice(&o.stdout).unwrap();
    cert.exponents = Some(vec![1, 1, 3]);
    assert!(!session.verify(&load("ot454"), &cert).unwrap());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(arr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(arr(&["check", "nice", &corpus("a222"), "--partition", "1,3|2"]).status.code(), Some(2));
    assert_eq!(arr(&["check", "nice", &corpus("notfactored")]).status.code(), Some(2));
    assert_eq!(arr(&["table", &corpus("ot454"), "--order", "1,2,3"]).status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let o = arr(&["check", "nice", &corpus("ot454"), "--max-transversals", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_file_exits_1() {
    assert_eq!(arr(&["poincare", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn parallel_search_matches_serial() {
    let f = corpus("indfreefactored-notindfactored2");
    let serial = stdout(&arr(&["find", "nice", &f]));
    let parallel = stdout(&arr(&["find", "nice", &f, "--jobs", "4"]));
    assert_eq!(serial, parallel);
    assert_eq!(serial.lines().count(), 2);
}

#[test]
fn restriction_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = arr(&["restrict", &corpus("g333"), "--at", "1"]);
    std::fs::write(&out, &o.stdout).unwrap();
    let o = arr(&["poincare", out.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "(1+t)(1+3t)");
}

#[test]
fn product_poincare_multiplies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let o = arr(&["product", &corpus("ot454"), &corpus("d21xphi1")]);
    std::fs::write(&out, &o.stdout).unwrap();
    let o = arr(&["poincare", out.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "(1+t)^2(1+2t)^3");
}

#[test]
fn os_verify_agrees() {
    let o = arr(&["os-verify", &corpus("a222")]);
    let out = stdout(&o);
    assert!(out.contains("agree: true"));
    assert!(!out.contains("agree: false"));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_arr"))
            .args(["check", "ind-free", &corpus("d13"), "--json"])
            .env("ARR_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    // A corrupted entry is ignored.
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "{\"property\":\"inductively-free\",\"verdict\":false,\"witness\":{\"kind\":\"none\"}}").unwrap();
    assert_eq!(run().stdout, first.stdout);
}
