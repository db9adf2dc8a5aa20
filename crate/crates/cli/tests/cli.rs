use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["mf-bridge"];
    argv.extend_from_slice(args);
    let code = mf_bridge::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn translate_set_to_emtt() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.fm", "all x. x in y");
    let (code, out, _) = run(&["translate", "--dir", "set2emtt", &f]);
    assert_eq!(code, 0);
    assert_eq!(out, "all x:V. x eps y\n");
}

#[test]
fn translate_emtt_to_set_by_mode() {
    let (code, out, _) = run(&["translate", "--dir", "emtt2set", "--lang", "emtt", "-e", "N1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "u = empty\n");
    let (code, _, err) = run(&["translate", "--dir", "emtt2set", "--mode", "delta", "--lang", "emtt", "-e", "N1"]);
    assert_eq!(code, 2);
    assert!(err.contains("does not apply"), "{}", err);
    let (code, out, _) =
        run(&["translate", "--dir", "emtt2set", "--mode", "context", "--lang", "emtt", "-e", "[x: N1]"]);
    assert_eq!(code, 0);
    assert!(out.contains("empty"), "{}", out);
}

#[test]
fn eval_in_rank_one() {
    let (code, out, _) = run(&["eval", "--rank", "1", "--env", "x={}", "--lang", "set", "-e", "x = empty"]);
    assert_eq!(code, 0);
    assert_eq!(out, "true\n");
    let (code, out, _) = run(&["eval", "--rank", "2", "--env", "x={}", "--lang", "set", "-e", "{x, x}"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{{}}\n");
}

#[test]
fn check_property_passes_and_is_deterministic() {
    let args = ["check", "--property", "oneside", "--seed", "7", "--samples", "50", "--rank", "3"];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0, "{}", a);
    assert!(a.contains("result: pass"));
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
}

#[test]
fn seed_comes_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_mf-bridge");
    let o = Command::new(bin)
        .args(["check", "--property", "freevars", "--samples", "5"])
        .env("MF_BRIDGE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("seed: 42\n"));
    let o = Command::new(bin)
        .args(["check", "--property", "freevars", "--samples", "5", "--seed", "3"])
        .env("MF_BRIDGE_SEED", "42")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("seed: 3\n"));
}

#[test]
fn parse_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    for (name, src) in [
        ("a.fm", "ex! x. x in Pow(y) /\\ (all z. z in x -> z = {y, y})"),
        ("b.mt", "all x:(Sig y:N1. List(N1)). x =[V] x /\\ x eps N1 + N0"),
    ] {
        let f = write(dir.path(), name, src);
        let (code, once, err) = run(&["parse", &f]);
        assert_eq!(code, 0, "{}", err);
        let g = write(dir.path(), &format!("again-{}", name), once.trim());
        let (code, twice, err) = run(&["parse", "--allow-reserved", &g]);
        assert_eq!(code, 0, "{}", err);
        assert_eq!(once, twice);
    }
}

#[test]
fn sexp_round_trip_through_the_cli() {
    let (code, s, _) = run(&["parse", "--lang", "set", "--format", "sexp", "-e", "all x. x in y -> x = x"]);
    assert_eq!(code, 0);
    let (code, back, _) = run(&["parse", "--lang", "set", "--input-format", "sexp", "-e", s.trim()]);
    assert_eq!(code, 0);
    assert_eq!(back, "all x. x in y -> x = x\n");
}

#[test]
fn classify_reports_delta0_and_flavor() {
    let (code, out, _) = run(&["classify", "--lang", "set", "--flavor", "czf", "-e", "all x. x in y -> x in z"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.starts_with("delta0: yes"));
    let (code, out, _) = run(&["classify", "--lang", "set", "--flavor", "czf", "-e", "all x. x in y"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("delta0: no"));
    let (code, out, _) = run(&["classify", "--lang", "set", "--flavor", "czf", "-e", "x = Pow(y)"]);
    assert_eq!(code, 1);
    assert!(out.contains("violation"), "{}", out);
}

#[test]
fn sigma_on_a_derivation_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.k0", "(step exists-in z y (eq (var z) (pow (var x))) (atom (mem x z)))");
    let g = write(dir.path(), "g.fm", "x = x");
    let (code, out, err) = run(&["sigma", "--derivation", &d, "--gamma", &g, "--rank", "3"]);
    assert_eq!(code, 0, "{}{}", out, err);
    assert!(out.contains("sigma: ex y. y in z /\\ x in z"), "{}", out);
    assert!(out.contains("delta0: yes"));
    assert!(out.contains("agreement: ok"));
    let bad = write(dir.path(), "bad.k0", "(step exists-in z y (mem (var z) (pow (var x))) (atom (eq y x)))");
    let (code, out, _) = run(&["sigma", "--derivation", &bad, "--gamma", &g, "--rank", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("refuted"));
}

#[test]
fn rules_list_and_check() {
    let (code, out, _) = run(&["rules", "--flavor", "czf", "--list"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("65 rules in emTT_CZF\n"));
    assert!(!out.contains("powerset-formation"));
    let (_, out, _) = run(&["rules", "--flavor", "zf", "--list"]);
    assert!(out.contains("excluded-middle"));

    let dir = tempfile::tempdir().unwrap();
    let ok = write(
        dir.path(),
        "ok.ri",
        "(instance pairing-formation (subst (a (emptyV)) (b (omegaV)))
           (premises (in (emptyV) (V)) (in (omegaV) (V)))
           (conclusion (in (pairV (emptyV) (omegaV)) (V))))",
    );
    let (code, out, _) = run(&["rules", "--flavor", "czf", "--check", &ok]);
    assert_eq!(code, 0, "{}", out);
    let bad = write(
        dir.path(),
        "bad.ri",
        "(instance star-equation (subst) (premises) (conclusion (eq (star) (omegaV) (N1))))",
    );
    let (code, out, _) = run(&["rules", "--flavor", "czf", "--check", &bad]);
    assert_eq!(code, 1);
    assert!(out.starts_with("mismatch: conclusion"), "{}", out);
    let (code, _, err) = run(&["rules", "--show", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["check", "--property", "oneside", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("--frobnicate"));
    let (code, _, err) = run(&["check", "--property", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonsense"));
    let (code, _, _) = run(&["check", "--property", "oneside", "--rank", "9"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["parse", "-e", "x in y"]);
    assert_eq!(code, 2);
    assert!(err.contains("--lang"));
    let (code, _, err) = run(&["parse", "--lang", "set", "-e", "all x. x in"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"));
    let (code, _, _) = run(&["parse", "/definitely/not/here.fm"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("translate"));
}
