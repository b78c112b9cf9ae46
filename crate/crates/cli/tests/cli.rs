use std::process::Command;

use serde_json::Value;

fn oppo(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_oppo")).args(args).output().expect("binary runs");
    (out.status.code().expect("exited"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn usage_errors_exit_with_three() {
    assert_eq!(oppo(&["verify", "--series", "nonsense"]).0, 3);
    assert_eq!(oppo(&["frobnicate"]).0, 3);
    assert_eq!(oppo(&["build", "--n", "0"]).0, 3);
    assert_eq!(oppo(&["--help"]).0, 0);
}

#[test]
fn build_reports_geometry() {
    let (code, out) = oppo(&["build", "--series", "gl", "--n", "1", "--q", "2"]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["schema"], "oppo.report/1");
    assert_eq!(report["suites"][0]["name"], "geometry");
    assert_eq!(report["suites"][0]["status"], "PASS");
}

#[test]
fn over_cap_field_is_a_skip() {
    let (code, out) = oppo(&["build", "--q", "7"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["status"], "SKIPPED");
}

#[test]
fn homology_of_the_plane_over_f2() {
    let (code, out) = oppo(&["homology", "--series", "gl", "--n", "1", "--q", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let building = &v["complexes"][0];
    assert_eq!(building["complex"], "building");
    // Solomon-Tits: a bouquet of q^3 = 8 circles.
    assert_eq!(building["reduced_homology"], serde_json::json!([[1, "Z^8"]]));
    assert_eq!(building["input_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn ranges_reproduce_the_closed_forms() {
    let (code, out) = oppo(&["ranges", "--gl", "sah"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let forms: Vec<&str> = v["derived"].as_array().unwrap().iter().map(|d| d["range"].as_str().unwrap()).collect();
    assert_eq!(forms, ["n >= 2k-1", "n >= 2 for k = 1; n >= k for k >= 2", "n >= 2 for k = 1; n >= k for k >= 2"]);
    let (_, out) = oppo(&["ranges", "--gl", "vdk", "--series", "u"]);
    assert_eq!(json(&out)["derived"][0]["range"], "n >= 2k");
}

#[test]
fn verify_writes_report_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let (report, cache) = (dir.path().join("r.json"), dir.path().join("c"));
    let args = [
        "verify",
        "--suite",
        "geometry",
        "--suite",
        "lhs",
        "--report",
        report.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ];
    let (code, out) = oppo(&args);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), out);
    let (code, again) = oppo(&args);
    assert_eq!(code, 0);
    assert_eq!(again, out);
    let (_, listing) = oppo(&["cache", "inspect", "--cache", cache.to_str().unwrap()]);
    assert_eq!(json(&listing)["entries"].as_array().unwrap().len(), 2);
    let (code, cleared) = oppo(&["cache", "clear", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&cleared)["removed"], 2);
}
