//! End-to-end behaviour of the `hksym` binary and its in-process entry point.

use std::process::Command;

use hksym::commands::*;
use hksym::paper_check::PaperCheckReport;
use hksym::run_with;
use hksym_core::orbits::DesignCertificate;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

fn run(args: &[&str]) -> hksym::Outcome {
    let mut all = vec!["hksym"];
    all.extend_from_slice(args);
    run_with(all, |_| None)
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

/// parse(emit(x)) = x, checked through the typed result.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(args: &[&str]) -> T {
    let v = json(args);
    let typed: T = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&typed).unwrap(), v, "{args:?}");
    let again: T = serde_json::from_str(&serde_json::to_string(&typed).unwrap()).unwrap();
    assert_eq!(again, typed);
    typed
}

#[test]
fn walls_markdown_is_stable() {
    let a = run(&["walls", "--vsq", "6", "--output", "markdown"]);
    let b = run(&["walls", "--vsq", "6", "--output", "markdown"]);
    assert_eq!(a, b);
    assert_eq!(a.code, 0);
    let lines: Vec<&str> = a.stdout.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "| (a,a) | (a,v) | (v−a,v−a) | Discriminant | Interpretation |");
    assert_eq!(lines[5], "| -2 | 3 | -2 | -21 | ℙ⁴ |");
    assert!(run(&["walls", "--vsq", "6", "--output", "csv"]).stdout.starts_with("a_sq,av,"));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["walls", "--vsq", "7"]);
    assert_eq!(out.code, 2);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "usage");
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["mori", "--n", "3"]).code, 2);
    assert_eq!(run(&["ample", "--n", "3", "--fsq", "114", "--div", "3"]).code, 2);
    // no csv rendering for a single record
    assert_eq!(run(&["mori", "--n", "3", "--fsq", "114", "--output", "csv"]).code, 2);
    assert_eq!(run(&["--jobs", "0", "walls", "--vsq", "2"]).code, 2);
}

#[test]
fn domain_errors_exit_1() {
    let out = run(&["mori", "--n", "3", "--fsq", "7"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "invalid_argument");
    let out = run(&["reflect", "--n", "3", "--fsq", "6", "--g", "1,0"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "bad_reflection");
    assert_eq!(run(&["ambiguity", "--n", "5"]).code, 1);
}

#[test]
fn ample_example() {
    let v = json(&["ample", "--n", "3", "--fsq", "114", "--div", "3,-16"]);
    assert_eq!(v["ample"], true);
    assert_eq!(v["pairings"]["second_ray"], "64");
    assert_eq!(v["square"], "2");
    let o: AmpleOutput = round_trip(&["ample", "--n", "3", "--fsq", "6", "--div", "1,-1"]);
    assert!(!o.ample);
    assert_eq!(o.pairings.second_ray, Some(0.into()));
    let neg: AmpleOutput = round_trip(&["ample", "--n", "3", "--fsq", "114", "--div", "-1,0"]);
    assert!(!neg.ample);
}

#[test]
fn results_round_trip() {
    round_trip::<WallsOutput>(&["walls", "--vsq", "12"]);
    let m: MoriOutput = round_trip(&["mori", "--n", "3", "--fsq", "114"]);
    assert_eq!(m.second_ray_class, "192f − 1025δ");
    let t: SmallTableOutput = round_trip(&["smalltable", "--n", "3", "--fsq", "114", "--window", "40"]);
    assert_eq!(t.rows.len(), 7);
    let o: OrbitOutput = round_trip(&["orbit", "--n", "3", "--fsq", "114", "--rho", "192,1025"]);
    assert_eq!((o.orbit.rho_sq.clone(), o.orbit.dv.clone(), o.orbit.disc_class.clone()), (
        (-4).into(),
        4.into(),
        1.into()
    ));
    assert_eq!(o.orbit, o.embedded_orbit);
    let d: DesignCertificate = round_trip(&["design", "--n", "2", "--s", "1", "--rho-sq", "-2"]);
    assert!(d.verdict);
    let r: ReflectOutput = round_trip(&["reflect", "--n", "3", "--fsq", "6", "--g", "1,-1"]);
    assert!(r.involution);
    assert!(!r.g_ample.ample);
    let a: AmbiguityOutput = round_trip(&["ambiguity", "--n", "7"]);
    assert_eq!(a.conclusion_text, "image ray not extremal; ample cones differ");
    let i: InvolutionOutput = round_trip(&["involution-search", "--ceiling", "120"]);
    assert!(i.hits.iter().any(|h| h.f_sq == 114.into()));
}

#[test]
fn smalltable_window_edges() {
    let t: SmallTableOutput = round_trip(&["smalltable", "--n", "3", "--fsq", "114", "--window", "-1"]);
    assert!(t.rows.is_empty());
    let t: SmallTableOutput =
        round_trip(&["smalltable", "--n", "3", "--fsq", "114", "--window", "40", "--max-rows", "3"]);
    assert_eq!(t.rows.len(), 3);
}

#[test]
fn paper_check_report() {
    let out = run(&["paper-check"]);
    let report: PaperCheckReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report.mismatches, vec!["d114.involution_first_hit".to_string()]);
    assert_eq!(out.code, 1);
    assert!(!report.degraded);
    let ids: Vec<&str> = report.noted_deviations.iter().map(|d| d.id.as_str()).collect();
    assert!(ids.contains(&"window-inclusive") && ids.contains(&"a-prime"));
    for c in 1..=9 {
        assert!(report.checks.iter().any(|x| x.criterion == c));
    }
    // deterministic given version and config
    assert_eq!(run(&["paper-check"]).stdout, out.stdout);
    let degraded = run(&["--window-override", "-100", "paper-check"]);
    let report: PaperCheckReport = serde_json::from_str(&degraded.stdout).unwrap();
    assert!(report.degraded);
}

#[test]
fn binary_exit_codes_and_config() {
    let bin = env!("CARGO_BIN_EXE_hksym");
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("hksym.conf");
    std::fs::write(&conf, "output = markdown\njobs = 2\n").unwrap();
    let out = Command::new(bin)
        .args(["walls", "--vsq", "2"])
        .env("HKSYM_CONFIG", &conf)
        .env("HKSYM_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("| (a,a)"));
    let out = Command::new(bin)
        .args(["--output", "json", "walls", "--vsq", "2"])
        .env("HKSYM_CONFIG", &conf)
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with('{'));
    let out = Command::new(bin).args(["walls", "--vsq", "7"]).current_dir(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).args(["mori", "--n", "1", "--fsq", "2"]).current_dir(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&conf, "colour = red\n").unwrap();
    let out = Command::new(bin).args(["walls", "--vsq", "2"]).env("HKSYM_CONFIG", &conf).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
