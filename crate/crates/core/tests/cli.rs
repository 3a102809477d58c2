use serde_json::Value;
use terai::cli::{run, EXIT_OK, EXIT_USAGE, OUT_DIR_ENV};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("terai").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = invoke(args);
    assert!(err.is_empty(), "stderr: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn verify_base_instance() {
    let (code, v) = json(&["verify", "--m", "5", "--n", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["solutions"], serde_json::json!([["20", "2", "2"]]));
    assert_eq!(v["verdict"], "theorem-consistent");
    assert_eq!(v["config"]["run"]["command"], "verify");
    assert_eq!(v["config"]["bounds"]["y_max"], "40");
    assert!(v["config"]["primality"].is_string());
}

#[test]
fn verify_rejects_non_qualifying() {
    let (code, out, err) = invoke(&["verify", "--m", "4", "--n", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("c = 5 (mod 8)"));
}

#[test]
fn verify_small_bounds_is_inconclusive() {
    let (code, v) = json(&["verify", "--m", "5", "--n", "2", "--y-max", "1", "--z-max", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "inconclusive");
}

#[test]
fn scan_lists_small_instances() {
    let (code, v) = json(&["scan", "--m-max", "10"]);
    assert_eq!(code, EXIT_OK);
    let got: Vec<(String, String)> = v["instances"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| (i["m"].as_str().unwrap().into(), i["n"].as_str().unwrap().into()))
        .collect();
    let want = [("5", "2"), ("6", "1"), ("9", "2"), ("10", "3"), ("10", "7")];
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert_eq!((g.0.as_str(), g.1.as_str()), w);
    }
}

#[test]
fn scan_csv() {
    let (code, out, _) = invoke(&["--format", "csv", "scan", "--m-max", "6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "m,n,a,b,c,p,q\n5,2,20,21,29,7,3\n6,1,12,35,37,7,5\n");
}

#[test]
fn solve_csv_and_json() {
    let (code, out, _) = invoke(&["solve", "--b", "21", "--c", "29", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "x,y,z\n20,2,2\n");
    let (code, out, _) = invoke(&["solve", "--b", "6", "--c", "9"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
}

#[test]
fn sieve_certificate() {
    let (code, v) = json(&["sieve", "--m", "6", "--n", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["parity"]["valid"], true);
    assert_eq!(v["parity"]["symbols"]["j_minus1_c"], "1");
    assert_eq!(v["parity"]["conclusions"]["k"], "odd");

    let (code, v) = json(&["sieve", "--m", "4", "--n", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["parity"]["valid"], false);
}

#[test]
fn trace_paths() {
    let (code, v) = json(&["trace", "--m", "6", "--n", "1", "--x", "12", "--y", "2", "--z", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["trace"]["verdict"], "theorem-consistent");
    assert_eq!(v["trace"]["pq"]["P"].as_str().unwrap().trim_start_matches('-'), "7");

    let (code, _, _) = invoke(&["trace", "--m", "6", "--n", "1", "--x", "12", "--y", "2", "--z", "2", "--format", "csv"]);
    assert_eq!(code, EXIT_USAGE);

    let (code, _, err) = invoke(&["trace", "--m", "6", "--n", "1", "--x", "13", "--y", "2", "--z", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn oracles() {
    let (code, v) = json(&["oracle", "cohn"]);
    assert_eq!(code, EXIT_OK);
    let hits = v["oracles"][0]["hits"].as_array().unwrap();
    assert!(hits.contains(&serde_json::json!(["239", "13", "4"])));
    assert_eq!(v["oracles"][0]["as_expected"], true);

    let (code, v) = json(&["oracle", "corollary-c", "--y-max", "200", "--q", "3,5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["oracles"][0]["hits"], serde_json::json!([]));

    let (code, _) = json(&["oracle", "lemma-l2", "--p", "7", "--n", "5"]);
    assert_eq!(code, EXIT_OK);

    let (code, _, _) = invoke(&["oracle", "lemma-l2", "--p", "8", "--n", "5"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn corollary_rejects_even_exponent() {
    let (code, _, _) = invoke(&["oracle", "corollary-c", "--q", "4"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn usage_errors_and_help() {
    let (code, _, err) = invoke(&["verify", "--m", "five", "--n", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"));
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify-range"));
    let (code, _, _) = invoke(&["verify", "--m", "5", "--n", "2", "--jobs", "0"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn jobs_do_not_change_output() {
    let strip = |mut v: Value| {
        for r in v["reports"].as_array_mut().unwrap() {
            r["elapsed_ms"] = Value::Null;
        }
        v["config"]["jobs"] = Value::Null;
        v
    };
    let (_, one) = json(&["--jobs", "1", "verify-range", "--m-max", "12"]);
    let (code, many) = json(&["--jobs", "4", "verify-range", "--m-max", "12"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(strip(one), strip(many));
}

#[test]
fn out_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(OUT_DIR_ENV, dir.path());
    let (code, out, _) = invoke(&["verify", "--m", "10", "--n", "7", "--out", "report.json"]);
    std::env::remove_var(OUT_DIR_ENV);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["solutions"], serde_json::json!([["140", "2", "2"]]));
    assert_eq!(terai::report::render_json(&v), text);
}
