use std::process::{Command, Output};

use serde_json::Value;

fn germlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn zeta_of_the_running_cubic() {
    let out = germlab(&["zeta", "--q", "3", "--poly", "1,-1,0,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "germlab/1");
    assert_eq!(v["command"], "zeta");
    assert!(v.get("jobs").is_none());
    let r = &v["report"];
    assert_eq!(r["weil"]["counts"], serde_json::json!([7]));
    assert_eq!(r["weil"]["p"], serde_json::json!([1, 3, 3]));
    assert_eq!(r["a_stable"], serde_json::json!([1, 3]));
    assert_eq!(r["sym_power_counts"][2], 28);
    assert_eq!(r["x_counts"][2], 25);
    assert_eq!(r["twist_counts"], serde_json::json!([1]));
}

#[test]
fn csv_output_has_a_header() {
    let out = germlab(&["--format", "csv", "zeta", "--q", "3", "--poly", "1,-1,0,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,a_stable,a_hat,sym_power_count,x_count")
    );
    assert_eq!(lines.next(), Some("0,1,1,1,1"));
    assert_eq!(lines.next(), Some("1,3,3,7,7"));
}

#[test]
fn orbital_and_germs_of_the_running_cubic() {
    let out = germlab(&["orbital", "--q", "3", "--poly", "1,-1,0,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(
        v["report"]["orbits"][0]["exact_flags"]["primary"],
        serde_json::json!([1, 6])
    );
    let out = germlab(&["germs", "--q", "3", "--poly", "1,-1,0,1"]);
    let v = json(&out);
    assert_eq!(
        v["report"]["orbits"][0]["solved"],
        serde_json::json!(["1", "3"])
    );
    assert_eq!(
        v["report"]["orbits"][0]["formula"],
        serde_json::json!(["1", "3"])
    );
    assert_eq!(
        v["report"]["stable"]["companion"],
        serde_json::json!([1, -3])
    );
}

#[test]
fn even_germs_use_the_flag_covers() {
    let out = germlab(&["germs", "--q", "3", "--poly", "1,0,0,0,1"]);
    assert!(out.status.success());
    let v = json(&out);
    let stable = &v["report"]["stable"]["primary"];
    let from_flags = &v["report"]["hyperbolic_from_flags"];
    for m in 0..2 {
        assert_eq!(from_flags[m].as_str().unwrap(), stable[m].to_string());
    }
}

#[test]
fn verify_output_does_not_depend_on_jobs() {
    let a = germlab(&[
        "--jobs",
        "1",
        "verify",
        "zeta",
        "--samples",
        "8",
        "--seed",
        "4",
    ]);
    let b = germlab(&[
        "--jobs",
        "3",
        "verify",
        "zeta",
        "--samples",
        "8",
        "--seed",
        "4",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["cases"], 24);
}

#[test]
fn invalid_input_fails() {
    assert!(!germlab(&["zeta", "--q", "6", "--poly", "1,1"])
        .status
        .success());
    assert!(!germlab(&["flags", "--q", "3", "--poly", "0,0,1"])
        .status
        .success());
    assert!(!germlab(&["orbital", "--q", "3", "--poly", "1,0,0,0,1"])
        .status
        .success());
}
