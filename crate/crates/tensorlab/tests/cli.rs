//! Black-box tests of the installed binary: exit codes, report shape,
//! determinism, and round trips through the example corpus.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tensorlab"))
        .args(args)
        .output()
        .expect("binary spawns");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
    )
}

fn parse(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("stdout is one JSON document")
}

/// Writes the example corpus into `dir` and returns a path helper.
fn fixtures(dir: &Path) -> impl Fn(&str) -> String + '_ {
    let (code, _, _) = run(&["examples", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "examples generation failed");
    move |name: &str| dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn decided_rank_exits_zero_with_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let (code, stdout, stderr) = run(&["rank", &path("w_state.gf2.json")]);
    assert_eq!(code, 0);
    assert!(stderr.contains("rank 3 (exact"));
    let v = parse(&stdout);
    assert_eq!(v["tool"], "tensorlab");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["command"], "rank");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["inputs"]["dims"], serde_json::json!([2, 2, 2]));
    assert_eq!(v["inputs"]["field"], "GF(2)");
    let cert = &v["certificates"][0];
    assert_eq!(cert["kind"], "exact");
    assert_eq!(cert["value"], 3);
    assert_eq!(cert["witness"].as_array().unwrap().len(), 3);
    let timings = v["timings"].as_array().unwrap();
    assert!(!timings.is_empty());
    assert_eq!(timings[0]["stage"], "rank");
}

#[test]
fn budget_exhaustion_exits_two_with_lower_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let (code, stdout, stderr) = run(&["rank", &path("diag3.gf2.json"), "--budget", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("rank at least 3"));
    let v = parse(&stdout);
    let cert = &v["certificates"][0];
    assert_eq!(cert["kind"], "lower");
    assert_eq!(cert["value"], 3);
    assert!(cert.get("witness").is_none());
}

#[test]
fn rational_rank_interval_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let (code, stdout, stderr) = run(&["rank", &path("w_state.q.json")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("rank within [2, 3]"));
    let v = parse(&stdout);
    assert_eq!(v["certificates"][0]["kind"], "lower");
    assert_eq!(v["certificates"][0]["value"], 2);
    assert_eq!(v["certificates"][1]["kind"], "upper");
    assert_eq!(v["certificates"][1]["value"], 3);
}

#[test]
fn errors_exit_one_with_minimal_json() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let (code, stdout, stderr) = run(&["rank", missing.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.starts_with("error:"));
    let v = parse(&stdout);
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), 3);
    assert_eq!(v["tool"], "tensorlab");
    assert!(v["error"].as_str().is_some());

    let (code, stdout, _) = run(&["table", "--max-dim", "7"]);
    assert_eq!(code, 1);
    assert!(parse(&stdout)["error"]
        .as_str()
        .unwrap()
        .contains("joint dimensions 1 through 5"));
}

#[test]
fn table_is_byte_stable_and_matches_golden() {
    let (code, first, stderr) = run(&["table", "--max-dim", "5"]);
    assert_eq!(code, 0);
    let (_, second, _) = run(&["table", "--max-dim", "5"]);
    assert_eq!(first.as_bytes(), second.as_bytes());
    let golden = "\
undecided direct sums with joint dimensions at most 5
 #  first    second   first values  second values
 1  (3,2,2)  (2,3,2)  {3}           {3}
 2  (3,3,2)  (2,2,3)  {3}           {3}
 3  (3,3,3)  (2,2,2)  {4,5}         {2}
 4  (4,2,2)  (1,2,2)  {4}           {2}
 5  (4,2,2)  (1,3,3)  {4}           {3}
 6  (4,3,2)  (1,2,2)  {4}           {2}
 7  (4,3,3)  (1,1,1)  {5}           {1}
 8  (4,3,3)  (1,2,2)  {5}           {2}
 9  (4,4,3)  (1,1,1)  {5,6}         {1}
10  (4,4,4)  (1,1,1)  {5,6,7}       {1}
";
    let v = parse(&first);
    assert_eq!(v["certificates"]["rendered"].as_str().unwrap(), golden);
    assert!(stderr.starts_with("undecided direct sums"));
    assert!(v.get("timings").is_none());
    assert_eq!(v["certificates"]["table"]["rows"].as_array().unwrap().len(), 10);

    let (code, empty, _) = run(&["table", "--max-dim", "4"]);
    assert_eq!(code, 0);
    assert!(parse(&empty)["certificates"]["rendered"]
        .as_str()
        .unwrap()
        .ends_with("(none)\n"));
}

#[test]
fn repeated_runs_differ_only_in_timings() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let file = path("diag2.gf2.json");
    let (_, first, _) = run(&["rank", &file]);
    let (_, second, _) = run(&["rank", &file]);
    let mut a = parse(&first);
    let mut b = parse(&second);
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(a, b);
}

#[test]
fn seed_is_recorded_globally() {
    let (code, stdout, _) = run(&["--seed", "7", "table", "--max-dim", "4"]);
    assert_eq!(code, 0);
    assert_eq!(parse(&stdout)["seed"], 7);
}

#[test]
fn border_additivity_on_the_product_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let (code, stdout, stderr) = run(&[
        "additivity",
        &path("mm213.q.json"),
        &path("mm121.q.json"),
        "--mode",
        "border",
    ]);
    assert_eq!(code, 0);
    assert!(stderr.contains("border additivity: fails"));
    let v = parse(&stdout);
    assert_eq!(v["certificates"]["border"]["route"], "known-counterexample");
    assert_eq!(v["certificates"]["border"]["additive"], false);
    assert_eq!(v["certificates"]["border"]["naive_sum"], 8);
    assert_eq!(v["certificates"]["interval"], serde_json::json!([7, 7]));
}

#[test]
fn rank_additivity_records_gates_and_classification() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let (code, stdout, stderr) = run(&[
        "additivity",
        &path("diag2.gf2.json"),
        &path("w_state.gf2.json"),
    ]);
    assert_eq!(code, 0);
    assert!(stderr.contains("rank additivity: holds"));
    let v = parse(&stdout);
    assert_eq!(v["certificates"]["ranks"]["additive"], true);
    assert_eq!(v["certificates"]["ranks"]["deficit"], 0);
    assert_eq!(v["certificates"]["ranks"]["rank_sum"]["value"], 5);
    assert_eq!(v["certificates"]["gates"]["additive"], true);
    let ineqs = v["certificates"]["classification"]["projection_inequalities"]
        .as_array()
        .unwrap();
    assert!(ineqs.iter().all(|x| x.as_bool() == Some(true)));
}

#[test]
fn classify_splits_the_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let (code, stdout, _) = run(&[
        "classify",
        &path("diag3.gf2.json"),
        "--split",
        "2,1,2,1,2,1",
    ]);
    assert_eq!(code, 0);
    let v = parse(&stdout);
    assert_eq!(v["certificates"]["space_dim"], 3);
    assert_eq!(v["certificates"]["bucket_counts"]["prime"], 2);
    assert_eq!(v["certificates"]["bucket_counts"]["bis"], 1);
    assert_eq!(v["certificates"]["bucket_counts"]["mix"], 0);
}

#[test]
fn mm_flatten_and_curve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixtures(dir.path());
    let out = dir.path().join("m.json");
    let (code, _, _) = run(&["mm", "1", "2", "1", "--out", out.to_str().unwrap(), "--field", "GF(2)"]);
    assert_eq!(code, 0);
    let (code, stdout, _) = run(&["rank", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(parse(&stdout)["certificates"][0]["value"], 2);

    let (code, stdout, stderr) = run(&["verify-curve", &path("mm_pair_curve.q.json")]);
    assert_eq!(code, 0);
    assert!(stderr.contains("at most 7"));
    let v = parse(&stdout);
    assert_eq!(v["certificates"]["certificate"]["value"], 7);
    assert_eq!(v["certificates"]["certificate"]["kind"], "upper");
    assert_eq!(v["inputs"]["target_dims"], serde_json::json!([4, 5, 7]));

    let (code, stdout, _) = run(&["flatten", &path("degenerate_322.q.json")]);
    assert_eq!(code, 0);
    let v = parse(&stdout);
    assert_eq!(v["certificates"]["bound"]["value"], 3);
    assert_eq!(v["certificates"]["flattening"]["rank"], 5);
}
