use std::fs;
use std::path::Path;

use potts_interp::cli::{main_with_args, BUNDLED_SUITE, EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_REFUSED};

fn suite(name: &str) -> String {
    format!("{BUNDLED_SUITE}/{name}.json")
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("potts").chain(args.iter().copied()))
}

fn out(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn exact_prints_poly_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(dir.path(), "k3.json");
    assert_eq!(run(&["exact", "--graph", &suite("k3-q3"), "--w", "0.5", "--out", &o]), EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&o).unwrap()).unwrap();
    assert_eq!(v["poly"], serde_json::json!(["6", "18", "0", "3"]));
    assert_eq!(v["value"]["re"], 15.375);
}

#[test]
fn coeffs_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = out(dir.path(), "c.json");
    assert_eq!(run(&["coeffs", "--graph", &suite("k3-q3"), "--order", "3", "--check", "--out", &o]), EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&o).unwrap()).unwrap();
    assert_eq!(v["a"], serde_json::json!(["27", "27", "9", "3"]));
    assert_eq!(v["engines_agree"], true);
}

#[test]
fn zeros_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (out(dir.path(), "a.csv"), out(dir.path(), "b.csv"));
    let spec = "n=7,delta=3,q=6,count=12,seed=9";
    assert_eq!(run(&["zeros", "--ensemble", spec, "--out", &a, "--workers", "1"]), EXIT_OK);
    assert_eq!(run(&["zeros", "--ensemble", spec, "--out", &b, "--workers", "3"]), EXIT_OK);
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(String::from_utf8(ta).unwrap().starts_with("graph_id,n,m,delta,q,clearance,tau_delta,condition_ok\n"));
    let ra = fs::read(dir.path().join("a.roots.json")).unwrap();
    assert_eq!(ra, fs::read(dir.path().join("b.roots.json")).unwrap());
}

#[test]
fn verify_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (out(dir.path(), "a.json"), out(dir.path(), "b.json"));
    for o in [&a, &b] {
        assert_eq!(run(&["verify", "--probe", "recurrence", "--seed", "3", "--count", "5", "--out", o]), EXIT_OK);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["constants", "--delta", "3", "--uniform", "--out", "/dev/null"]), EXIT_OK);
    assert_eq!(run(&["constants", "--delta", "0"]), EXIT_INPUT);
    assert_eq!(run(&["exact", "--graph", &suite("k4-q6"), "--budget-enum", "10"]), EXIT_BUDGET);
    assert_eq!(run(&["coeffs", "--graph", &suite("k4-q6"), "--order", "6", "--budget-subsets", "3"]), EXIT_BUDGET);
    assert_eq!(run(&["interpolate", "--graph", &suite("k3-q3"), "--w", "0.5", "--mode", "rigorous"]), EXIT_REFUSED);
    assert_eq!(run(&["interpolate", "--graph", &suite("k3-q3"), "--w", "0.5", "--order-cap", "10"]), EXIT_BUDGET);
    assert_eq!(run(&["interpolate", "--graph", &suite("k3-q3"), "--w", "3,1"]), EXIT_INPUT);
    assert_eq!(run(&["zeros", "--ensemble", "n=2,delta=3"]), EXIT_INPUT);
    assert_eq!(run(&["exact", "--graph", &suite("k3-q3"), "--budget-enum", "0"]), EXIT_INPUT);
}
