use std::path::PathBuf;
use std::process::Command as Proc;

use lsgamma::arith::parse_rf;
use lsgamma_cli::{parse_eval, run, Command, ErrorClass, FactorKind, Format, Options, Output};

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn run_doc(cmd: Command, name: &str) -> Output {
    run(cmd, Some(&data(name)), &Options::default()).unwrap()
}

fn form<'a>(out: &'a Output, name: &str) -> &'a str {
    &out.factors.iter().find(|f| f.name == name).unwrap().form
}

fn fact<'a>(out: &'a Output, name: &str) -> &'a str {
    &out.facts.iter().find(|f| f.name == name).unwrap().value
}

#[test]
fn tate_trivial_character() {
    let out = run_doc(Command::Factor(FactorKind::Tate), "tate_trivial.json");
    assert_eq!(form(&out, "L"), "1/(1 - Z)");
    assert_eq!(form(&out, "eps"), "1");
    assert_eq!(form(&out, "gamma"), "-q·Z·(1 - Z)/(1 - q·Z)");
}

#[test]
fn twisted_gspin2_is_one() {
    let out = run_doc(Command::Factor(FactorKind::Twisted), "twisted_gspin2.json");
    assert_eq!(form(&out, "gamma"), "1");
}

#[test]
fn rootdatum_b2() {
    let out = run_doc(Command::RootDatum, "rootdatum_b2.json");
    assert_eq!(fact(&out, "cartan"), "[[2,-2],[-1,2]]");
    assert_eq!(fact(&out, "l(w0)"), "3");
    assert!(out.ok);
}

#[test]
fn transfer_stability_and_plancherel_assertions_hold() {
    for (cmd, doc) in [
        (Command::TransferCheck, "transfer.json"),
        (Command::StabilityDemo, "stability.json"),
        (Command::Plancherel, "plancherel_n3.json"),
    ] {
        let out = run_doc(cmd, doc);
        assert!(out.ok, "{}", out.render());
    }
}

#[test]
fn scan_reports_every_conductor() {
    let opts = Options { scan_threshold: true, ..Options::default() };
    let out = run(Command::StabilityDemo, Some(&data("stability.json")), &opts).unwrap();
    for a in 1..=4 {
        assert!(out.facts.iter().any(|f| f.name == format!("a(eta) = {a}")));
    }
    assert_eq!(fact(&out, "guaranteed threshold"), "4");
}

#[test]
fn output_is_deterministic_and_forms_round_trip() {
    let docs = [
        (Command::Factor(FactorKind::Tate), "tate_trivial.json"),
        (Command::Factor(FactorKind::Twisted), "twisted_n2.json"),
        (Command::TransferCheck, "transfer.json"),
        (Command::StabilityDemo, "stability.json"),
        (Command::Plancherel, "plancherel_n3.json"),
    ];
    for (cmd, doc) in docs {
        for format in [Format::Text, Format::Json] {
            let opts = Options { format: Some(format), eval: vec![parse_eval("s=0.3-1.5i").unwrap()], ..Options::default() };
            let a = run(cmd, Some(&data(doc)), &opts).unwrap();
            let b = run(cmd, Some(&data(doc)), &opts).unwrap();
            assert_eq!(a.render(), b.render(), "{doc}");
        }
        let out = run_doc(cmd, doc);
        let q = out.q.unwrap();
        for f in &out.factors {
            let back = parse_rf(&f.form, q).unwrap();
            assert_eq!(back.to_string(), f.form, "{doc}: {}", f.name);
        }
    }
}

#[test]
fn eval_points_are_reported() {
    let out = run_doc(Command::Factor(FactorKind::Twisted), "twisted_n2.json");
    let g = out.factors.iter().find(|f| f.name == "gamma").unwrap();
    assert_eq!(g.evaluations.len(), 1);
    assert_eq!(g.evaluations[0].s, "0.500000000000+1.000000000000i");
}

#[test]
fn schema_errors_carry_json_pointers() {
    let cases = [
        (r#"{"field": {"p": 3, "f": 1, "level": 2}, "bogus": 1}"#, "/bogus"),
        (r#"{"field": {"p": 3, "f": 1, "level": "2"}}"#, "/field/level"),
        (r#"{"field": {"p": 3, "f": 1, "level": 2}, "character": "nope"}"#, "/character"),
        (
            r#"{"field": {"p": 3, "f": 1, "level": 2}, "characters": {"a/b": {"conductor": 5, "pi_value": {"zeta_order": 1, "zeta_power": 0}}}}"#,
            "/characters/a~1b",
        ),
        (
            r#"{"field": {"p": 3, "f": 1, "level": 2}, "characters": {"x": {"conductor": 0, "pi_value": {"zeta_order": 1, "zeta_power": 0}}}, "parameter": {"principal": ["x", "y"]}, "r0": "sym2", "eta": "x"}"#,
            "/parameter/principal/1",
        ),
        (r#"{"field": {"p": 3, "f": 1, "level": 2}}"#, "/character"),
    ];
    for (doc, pointer) in cases {
        let kind = if doc.contains("parameter") { FactorKind::Twisted } else { FactorKind::Tate };
        let e = run(Command::Factor(kind), Some(doc), &Options::default()).unwrap_err();
        assert_eq!(e.class, ErrorClass::Usage, "{doc}");
        assert_eq!(e.pointer.as_deref(), Some(pointer), "{doc}: {e}");
    }
}

#[test]
fn eval_parsing() {
    assert_eq!(parse_eval("s=0.5+2i").unwrap().im, 2.0);
    assert_eq!(parse_eval("-1").unwrap().re, -1.0);
    assert!(parse_eval("s=half").is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lsgamma");
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let ok = Proc::new(bin).args(["factor", "tate"]).arg(dir.join("tate_trivial.json")).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("gamma = -q·Z·(1 - Z)/(1 - q·Z)"));
    let bad = Proc::new(bin).args(["factor", "twisted"]).arg(dir.join("tate_trivial.json")).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("/parameter"));
}
