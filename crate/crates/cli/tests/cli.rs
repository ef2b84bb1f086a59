//! End-to-end tests of the `metrize` binary: exit codes, output shapes, and
//! determinism of the documented interface.

use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

/// Runs the binary with a scrubbed environment; returns (stdout, stderr, code).
fn run(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_metrize"));
    cmd.args(args)
        .env_remove("METRIZE_EPS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (key, value) in env {
        cmd.env(key, value);
    }
    let mut child = cmd.spawn().expect("binary spawns");
    // A usage error can end the process before it reads anything.
    let _ = child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(stdin.unwrap_or("").as_bytes());
    let out = child.wait_with_output().expect("binary finishes");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().expect("no signal"),
    )
}

fn metrize(args: &[&str], stdin: Option<&str>) -> (String, String, i32) {
    run(args, stdin, &[])
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("stdout is one JSON value")
}

const TRIANGLE_113: &str = "edge a b 1\nedge b c 1\nedge a c 3\n";
const QUAD_UNIT: &str = "edge v1 v2 1\nedge v2 v3 1\nedge v3 v4 1\nedge v4 v1 1\n";
const TWO_COMPONENTS: &str = "node a\nnode b\nnode c\nnode d\nedge a b 1\nedge c d 2\n";

#[test]
fn quad_reports_exact_closed_forms() {
    let (out, _, code) = metrize(&["quad", "1", "2", "3", "4"], None);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["metrizable"], Value::Bool(true));
    assert_eq!(report["v1_v3"], serde_json::json!([1.0, 3.0]));
    assert_eq!(report["v2_v4"], serde_json::json!([3.0, 5.0]));

    let (out, _, code) = metrize(&["quad", "1", "1", "1", "4"], None);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["metrizable"], Value::Bool(false));
}

#[test]
fn quad_rejects_bad_sides() {
    let (_, err, code) = metrize(&["quad", "1", "2", "3", "--", "-4"], None);
    assert_eq!(code, 2);
    assert!(err.contains("negative"));
    let (_, _, code) = metrize(&["quad", "1", "2", "3"], None);
    assert_eq!(code, 2);
}

#[test]
fn check_negative_verdict_carries_a_witness() {
    let (out, _, code) = metrize(&["check", "--stdin"], Some(TRIANGLE_113));
    assert_eq!(code, 1);
    let report = json(&out);
    assert_eq!(report["metrizable"], Value::Bool(false));
    assert_eq!(report["witness"]["lhs"], serde_json::json!(6.0));
    assert_eq!(report["witness"]["rhs"], serde_json::json!(5.0));
    assert_eq!(report["witness"]["max_edge"], serde_json::json!(["a", "c"]));
}

#[test]
fn matrix_output_validates_against_its_own_graph() {
    let dir = tempfile::tempdir().expect("tempdir");
    let graph_path = dir.path().join("quad.el");
    std::fs::write(&graph_path, QUAD_UNIT).expect("write graph");
    let graph = graph_path.to_str().expect("utf-8 path");

    let (tsv, _, code) = metrize(&["matrix", "--input", graph, "--tsv"], None);
    assert_eq!(code, 0);
    let matrix_path = dir.path().join("quad.tsv");
    std::fs::write(&matrix_path, &tsv).expect("write matrix");

    let (out, _, code) = metrize(
        &[
            "validate",
            matrix_path.to_str().expect("utf-8 path"),
            "--input",
            graph,
        ],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(json(&out), serde_json::json!({ "ok": true }));
}

#[test]
fn validate_flags_a_triangle_violation() {
    let dir = tempfile::tempdir().expect("tempdir");
    let matrix_path = dir.path().join("bad.tsv");
    // Claims d(a, c) = 3 while d(a, b) + d(b, c) = 2.
    std::fs::write(
        &matrix_path,
        "\ta\tb\tc\na\t0\t1\t3\nb\t1\t0\t1\nc\t3\t1\t0\n",
    )
    .expect("write matrix");
    let (out, _, code) = metrize(
        &[
            "validate",
            matrix_path.to_str().expect("utf-8 path"),
            "--stdin",
        ],
        Some("edge a b 1\nedge b c 1\nedge a c 3\n"),
    );
    // The graph itself is not metrizable, but membership only checks the
    // matrix against the weight: the edge values match, the triangle fails.
    assert_eq!(code, 1);
    let verdict = json(&out);
    assert_eq!(verdict["ok"], Value::Bool(false));
    assert!(verdict["violation"]
        .as_str()
        .expect("violation message")
        .contains("triangle"));
}

#[test]
fn validate_rejects_infinite_entries_as_input_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let matrix_path = dir.path().join("inf.tsv");
    std::fs::write(&matrix_path, "\ta\tb\na\t0\tinf\nb\tinf\t0\n").expect("write matrix");
    let (out, err, code) = metrize(
        &[
            "validate",
            matrix_path.to_str().expect("utf-8 path"),
            "--stdin",
        ],
        Some("node a\nnode b\n"),
    );
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("finite"));
}

#[test]
fn validate_rejects_mismatched_labels_as_input_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let matrix_path = dir.path().join("other.tsv");
    std::fs::write(&matrix_path, "\tx\ty\nx\t0\t1\ny\t1\t0\n").expect("write matrix");
    let (_, _, code) = metrize(
        &[
            "validate",
            matrix_path.to_str().expect("utf-8 path"),
            "--stdin",
        ],
        Some("edge a b 1\n"),
    );
    assert_eq!(code, 2);
}

#[test]
fn matrix_on_disconnected_input_prints_inf_tokens() {
    let (tsv, _, code) = metrize(&["matrix", "--stdin", "--tsv"], Some(TWO_COMPONENTS));
    assert_eq!(code, 0);
    assert!(tsv
        .lines()
        .nth(1)
        .expect("row a")
        .split('\t')
        .any(|f| f == "inf"));

    let (out, _, code) = metrize(&["matrix", "--stdin"], Some(TWO_COMPONENTS));
    assert_eq!(code, 0);
    let m = json(&out);
    assert_eq!(m["entries"][0][2], serde_json::json!("inf"));
}

#[test]
fn least_on_a_non_multipartite_graph_names_the_missing_least_element() {
    let (out, _, code) = metrize(
        &["least", "--stdin"],
        Some("edge a b 1\nedge b c 1\nedge c d 1\n"),
    );
    assert_eq!(code, 1);
    let verdict = json(&out);
    assert_eq!(
        verdict["detail"],
        serde_json::json!("least element does not exist for some metrizable weight on this graph")
    );
}

#[test]
fn least_on_a_non_metrizable_multipartite_graph_reports_the_weight() {
    let (out, _, code) = metrize(
        &["least", "--stdin"],
        Some("edge v1 v2 1\nedge v2 v3 1\nedge v3 v4 1\nedge v4 v1 4\n"),
    );
    assert_eq!(code, 1);
    let verdict = json(&out);
    assert!(verdict["violation"].is_null());
    assert!(verdict["error"]
        .as_str()
        .expect("error message")
        .contains("not metrizable"));
    assert!(verdict["detail"].is_null());
}

#[test]
fn interval_distinguishes_verdicts_from_input_errors() {
    let (out, _, code) = metrize(&["interval", "v1", "v3", "--stdin"], Some(QUAD_UNIT));
    assert_eq!(code, 0);
    let interval = json(&out);
    assert_eq!(interval["lower"], serde_json::json!(0.0));
    assert_eq!(interval["upper"], serde_json::json!(2.0));

    // Adjacent pair: the value is pinned by the weight, a usage error.
    let (_, _, code) = metrize(&["interval", "v1", "v2", "--stdin"], Some(QUAD_UNIT));
    assert_eq!(code, 2);
    // Unknown vertex: input error.
    let (_, _, code) = metrize(&["interval", "v1", "zz", "--stdin"], Some(QUAD_UNIT));
    assert_eq!(code, 2);
    // Non-multipartite graph: negative verdict.
    let (_, _, code) = metrize(
        &["interval", "a", "d", "--stdin"],
        Some("edge a b 1\nedge b c 1\nedge c d 1\n"),
    );
    assert_eq!(code, 1);
}

#[test]
fn eps_resolution_prefers_flag_over_env_over_default() {
    // 2 * 3.4 = 6.8 vs perimeter 6.4: not metrizable at the default eps.
    let (out, _, code) = metrize(&["quad", "1", "1", "1", "3.4"], None);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["metrizable"], Value::Bool(false));

    let (out, _, code) = run(
        &["quad", "1", "1", "1", "3.4"],
        None,
        &[("METRIZE_EPS", "0.5")],
    );
    assert_eq!(code, 0);
    assert_eq!(json(&out)["metrizable"], Value::Bool(true));

    let (out, _, code) = run(
        &["quad", "1", "1", "1", "3.4", "--eps", "1e-9"],
        None,
        &[("METRIZE_EPS", "0.5")],
    );
    assert_eq!(code, 1);
    assert_eq!(json(&out)["metrizable"], Value::Bool(false));

    let (_, err, code) = run(
        &["quad", "1", "1", "1", "3.4"],
        None,
        &[("METRIZE_EPS", "wide")],
    );
    assert_eq!(code, 2);
    assert!(err.contains("METRIZE_EPS"));

    let (_, err, code) = metrize(&["quad", "1", "1", "1", "1", "--eps", "-0.5"], None);
    assert_eq!(code, 2);
    assert!(err.contains("--eps"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["sandwich-sample", "--stdin", "--seed", "42"],
        vec!["sandwich-sample", "--stdin", "--seed", "42", "--tsv"],
        vec!["generate", "arbitrary", "--seed", "42"],
        vec![
            "generate",
            "multipartite",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    ] {
        let first = metrize(&args, Some(QUAD_UNIT));
        let second = metrize(&args, Some(QUAD_UNIT));
        assert_eq!(first, second, "args: {args:?}");
        assert_eq!(first.2, 0);
    }
}

#[test]
fn generated_instances_parse_back_through_both_formats() {
    for class in ["arbitrary", "connected", "forest", "multipartite"] {
        let (edge_list, _, code) = metrize(&["generate", class, "--seed", "11"], None);
        assert_eq!(code, 0);
        let (_, _, code) = metrize(&["check", "--stdin"], Some(&edge_list));
        assert!(code <= 1, "verdict, not an input error");

        let (graph_json, _, code) = metrize(
            &["generate", class, "--seed", "11", "--format", "json"],
            None,
        );
        assert_eq!(code, 0);
        let (_, _, code) = metrize(&["check", "--stdin", "--format", "json"], Some(&graph_json));
        assert!(code <= 1, "verdict, not an input error");
    }
}

#[test]
fn sandwich_sample_and_validate_round_trip() {
    let (sample, _, code) = metrize(
        &["sandwich-sample", "--stdin", "--seed", "3", "--tsv"],
        Some(QUAD_UNIT),
    );
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("sample.tsv");
    std::fs::write(&path, &sample).expect("write sample");
    let (out, _, code) = metrize(
        &[
            "sandwich-validate",
            path.to_str().expect("utf-8 path"),
            "--stdin",
        ],
        Some(QUAD_UNIT),
    );
    assert_eq!(code, 0);
    assert_eq!(json(&out), serde_json::json!({ "ok": true }));
}

#[test]
fn sandwich_validate_rejects_values_outside_the_envelope() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("outside.tsv");
    // d(v1, v3) = 9 exceeds the greatest extension 2.
    std::fs::write(
        &path,
        "\tv1\tv2\tv3\tv4\nv1\t0\t1\t9\t1\nv2\t1\t0\t1\t1\nv3\t9\t1\t0\t1\nv4\t1\t1\t1\t0\n",
    )
    .expect("write matrix");
    let (out, _, code) = metrize(
        &[
            "sandwich-validate",
            path.to_str().expect("utf-8 path"),
            "--stdin",
        ],
        Some(QUAD_UNIT),
    );
    assert_eq!(code, 1);
    let verdict = json(&out);
    assert_eq!(verdict["ok"], Value::Bool(false));
    assert!(verdict["violation"]
        .as_str()
        .expect("message")
        .contains("outside"));
}

#[test]
fn sandwich_commands_refuse_large_parts_as_a_verdict() {
    let star3 = "edge u v1 1\nedge u v2 1\nedge u v3 1\n";
    let (out, _, code) = metrize(&["sandwich-sample", "--stdin"], Some(star3));
    assert_eq!(code, 1);
    assert!(json(&out)["error"]
        .as_str()
        .expect("message")
        .contains("size 3"));
}

#[test]
fn complete_honors_a_spec_file_and_rejects_a_broken_one() {
    let dir = tempfile::tempdir().expect("tempdir");
    let spec_path = dir.path().join("spec.json");
    std::fs::write(
        &spec_path,
        r#"{"anchors":{"a":"b","c":"c"},"base":"a","constants":{"a":0.0,"c":2.5}}"#,
    )
    .expect("write spec");
    let spec = spec_path.to_str().expect("utf-8 path");
    let (out, _, code) = metrize(
        &["complete", "--spec", spec, "--stdin"],
        Some(TWO_COMPONENTS),
    );
    assert_eq!(code, 0);
    let m = json(&out);
    // b anchors its component: d(b, c) = 0 + 2.5 + 0 + 0.
    let labels: Vec<&str> = m["vertices"]
        .as_array()
        .expect("vertices")
        .iter()
        .map(|v| v.as_str().expect("label"))
        .collect();
    let (bi, ci) = (
        labels.iter().position(|&l| l == "b").expect("b"),
        labels.iter().position(|&l| l == "c").expect("c"),
    );
    assert_eq!(m["entries"][bi][ci], serde_json::json!(2.5));

    let bad_path = dir.path().join("bad.json");
    std::fs::write(
        &bad_path,
        r#"{"anchors":{"a":"zz"},"base":"a","constants":{}}"#,
    )
    .expect("write spec");
    let (_, err, code) = metrize(
        &[
            "complete",
            "--spec",
            bad_path.to_str().expect("utf-8 path"),
            "--stdin",
        ],
        Some(TWO_COMPONENTS),
    );
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn complete_without_a_spec_uses_unit_constants() {
    let (out, _, code) = metrize(&["complete", "--stdin"], Some(TWO_COMPONENTS));
    assert_eq!(code, 0);
    let m = json(&out);
    // Anchors a and c at unit separation; all entries finite.
    assert_eq!(m["entries"][0][2], serde_json::json!(1.0));
    for row in m["entries"].as_array().expect("rows") {
        for entry in row.as_array().expect("entries") {
            assert!(entry.is_number());
        }
    }
}

#[test]
fn complete_refuses_a_non_metrizable_weight_as_a_verdict() {
    let (out, _, code) = metrize(&["complete", "--stdin"], Some(TRIANGLE_113));
    assert_eq!(code, 1);
    assert!(json(&out)["error"]
        .as_str()
        .expect("message")
        .contains("not metrizable"));
}

#[test]
fn oracle_commands_respect_the_safety_bound() {
    let big: String = (0..11).map(|i| format!("node n{i:02}\n")).collect();
    let (_, err, code) = metrize(&["oracle", "cycles", "--stdin"], Some(&big));
    assert_eq!(code, 2);
    assert!(err.contains("bound"));
    let (out, _, code) = metrize(&["oracle", "cycles", "--stdin", "--force"], Some(&big));
    assert_eq!(code, 0);
    assert_eq!(json(&out), serde_json::json!({ "cycles": [] }));
}

#[test]
fn oracle_check_agrees_with_check_on_fixtures() {
    for (graph, expected) in [(TRIANGLE_113, 1), (QUAD_UNIT, 0)] {
        let (_, _, fast) = metrize(&["check", "--stdin"], Some(graph));
        let (out, _, slow) = metrize(&["oracle", "check", "--stdin"], Some(graph));
        assert_eq!(fast, expected);
        assert_eq!(slow, expected);
        let verdict = json(&out);
        assert_eq!(verdict["holds"], Value::Bool(expected == 0));
        assert_eq!(verdict["witness"].is_null(), expected == 0);
    }
}

#[test]
fn oracle_rho0_matches_the_interval_lower_bound() {
    let star = "edge a b 5\nedge a c 2\n";
    let (out, _, code) = metrize(&["oracle", "rho0", "b", "c", "--stdin"], Some(star));
    assert_eq!(code, 0);
    assert_eq!(json(&out)["value"], serde_json::json!(3.0));
    let (_, _, code) = metrize(&["oracle", "rho0", "a", "b", "--stdin"], Some(star));
    assert_eq!(code, 2);
}

#[test]
fn oracle_matrix_agrees_with_matrix() {
    let (fast, _, code) = metrize(&["matrix", "--stdin"], Some(QUAD_UNIT));
    assert_eq!(code, 0);
    let (slow, _, code) = metrize(&["oracle", "matrix", "--stdin"], Some(QUAD_UNIT));
    assert_eq!(code, 0);
    assert_eq!(json(&fast), json(&slow));
}

#[test]
fn verdict_subcommands_answer_through_exit_codes() {
    let path = "edge a b 1\nedge b c 1\n";
    for (args, input, expected) in [
        (vec!["forest"], path, 0),
        (vec!["forest"], QUAD_UNIT, 1),
        (vec!["star"], path, 0),
        (vec!["star"], QUAD_UNIT, 1),
        (vec!["partition"], QUAD_UNIT, 0),
        (vec!["partition"], "edge a b 1\nedge b c 1\nedge c d 1\n", 1),
        (vec!["metric-exists"], path, 0),
        (vec!["metric-exists"], "edge a b 0\n", 1),
        (vec!["metric-exists"], TRIANGLE_113, 1),
        (vec!["bridges"], QUAD_UNIT, 0),
    ] {
        let mut full = args.clone();
        full.push("--stdin");
        let (_, _, code) = metrize(&full, Some(input));
        assert_eq!(code, expected, "args: {args:?}");
    }
}

#[test]
fn missing_and_conflicting_inputs_are_usage_errors() {
    let (_, err, code) = metrize(&["check"], None);
    assert_eq!(code, 2);
    assert!(err.contains("--input") && err.contains("--stdin"));
    let (_, _, code) = metrize(&["check", "--stdin", "--input", "x.el"], None);
    assert_eq!(code, 2);
    let (_, _, code) = metrize(&["not-a-command"], None);
    assert_eq!(code, 2);
    let (_, _, code) = metrize(&["check", "--stdin", "--format", "yaml"], None);
    assert_eq!(code, 2);
}
