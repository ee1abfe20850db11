use std::io::Write;
use std::process::{Command, Output};

fn weakseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakseq"))
        .args(args)
        .env_remove("WEAKSEQ_SEED")
        .output()
        .expect("binary runs")
}

fn weakseq_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakseq"))
        .args(args)
        .env_remove("WEAKSEQ_SEED")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).expect("json stdout")
}

#[test]
fn verify_seq_violation_exits_one() {
    let out = weakseq(&["verify-seq", "--group", "Z4", "--ordering", "2,2", "--t", "2"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["ok"], serde_json::json!(false));
    assert_eq!(v["violation"], serde_json::json!([0, 2]));

    let ok = weakseq(&["verify-seq", "--group", "Z4", "--ordering", "2,2", "--t", "1"]);
    assert_eq!(code(&ok), 0);
}

#[test]
fn sequence_large_instance_round_trips() {
    let multiset = (1..=20).map(|x| format!("{x}^2")).collect::<Vec<_>>().join(",");
    let out = weakseq(&[
        "sequence", "--group", "Z101", "--multiset", &multiset, "--t", "1", "--seed", "7",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verified"], serde_json::json!(true));
    assert_eq!(v["seed"], serde_json::json!(7));
    assert_eq!(v["ordering"].as_array().unwrap().len(), 40);

    let ordering = v["ordering"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let check = weakseq(&["verify-seq", "--group", "Z101", "--ordering", &ordering, "--t", "1"]);
    assert_eq!(code(&check), 0);
}

#[test]
fn realize_round_trips_through_verify_real() {
    let out = weakseq(&["realize", "--group", "Z11", "--multiset", "1^7,2,3", "--t", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["route"], serde_json::json!("glue"));
    assert_eq!(v["verified"], serde_json::json!(true));

    let walk = v["walk"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let check = weakseq(&[
        "verify-real", "--group", "Z11", "--walk", &walk, "--multiset", "1^7,2,3", "--t", "1",
    ]);
    assert_eq!(code(&check), 0);

    let bad = weakseq(&[
        "verify-real", "--group", "Z11", "--walk", "0,1,2", "--multiset", "1^7,2,3", "--t", "1",
    ]);
    assert_eq!(code(&bad), 1);
    assert_eq!(json(&bad)["failure"], serde_json::json!("length"));
}

#[test]
fn bound_formats() {
    let plain = weakseq(&["bound", "--t", "1", "--ell", "4", "--format", "plain"]);
    assert_eq!(code(&plain), 0);
    assert_eq!(stdout(&plain).trim(), "1/2");

    let js = weakseq(&["bound", "--t", "1", "--ell", "2"]);
    assert_eq!(
        stdout(&js).trim(),
        r#"{"t":1,"ell":2,"bound_rational":"1","bound_float":1.0}"#
    );

    let csv = weakseq(&[
        "bound", "--t", "1", "--ell", "2", "--ell-end", "4", "--format", "csv",
    ]);
    let text = stdout(&csv);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "t, ell, bound_rational, bound_float");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3], "1, 4, 1/2, 0.500000");

    let bad = weakseq(&["bound", "--t", "1", "--ell", "4", "--ell-end", "2"]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn min_ell_outputs() {
    let plain = weakseq(&["min-ell", "--t", "1", "--format", "plain"]);
    assert_eq!(stdout(&plain).trim(), "3");
    assert_eq!(code(&plain), 0);

    let js = weakseq(&["min-ell", "--t", "2"]);
    assert_eq!(json(&js)["min_ell"], serde_json::json!(15));
}

#[test]
fn search_verdict_exit_codes() {
    let none = weakseq(&[
        "search", "--group", "Z4", "--multiset", "2^2", "--t", "2", "--target", "realization",
    ]);
    assert_eq!(code(&none), 1);
    assert_eq!(json(&none)["outcome"], serde_json::json!("exhausted-none"));

    let found = weakseq(&[
        "search", "--group", "Z7", "--multiset", "1,2", "--t", "1", "--target", "sequencing",
    ]);
    assert_eq!(code(&found), 0);
    assert_eq!(json(&found)["outcome"], serde_json::json!("found"));
    assert_eq!(json(&found)["witness"], serde_json::json!([1, 2]));

    let undecided = weakseq(&[
        "search", "--group", "Z11", "--multiset", "1^4,2^4", "--t", "2", "--target",
        "sequencing", "--budget", "1",
    ]);
    assert_eq!(code(&undecided), 2);

    let over_cap = weakseq(&[
        "search", "--group", "Z101", "--multiset", "1^20", "--t", "1", "--target", "sequencing",
    ]);
    assert_eq!(code(&over_cap), 2);
}

#[test]
fn parse_errors_exit_three() {
    assert_eq!(code(&weakseq(&["bound", "--t", "0", "--ell", "4"])), 3);
    assert_eq!(code(&weakseq(&["bound", "--t", "1"])), 3);
    assert_eq!(code(&weakseq(&["nonsense"])), 3);
    assert_eq!(
        code(&weakseq(&["sequence", "--group", "Q8", "--multiset", "1", "--t", "1"])),
        3
    );
    assert_eq!(
        code(&weakseq(&["sequence", "--group", "Z7", "--multiset", "1^0", "--t", "1"])),
        3
    );
    assert_eq!(
        code(&weakseq(&["sequence", "--group", "Z7", "--multiset", "0,1", "--t", "1"])),
        3
    );
    assert_eq!(
        code(&weakseq(&[
            "verify-seq", "--group", "Z7", "--ordering", "1,2", "--t", "1", "--format", "csv",
        ])),
        3
    );
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&weakseq(&["--help"])), 0);
    assert_eq!(code(&weakseq(&["--version"])), 0);
    assert_eq!(code(&weakseq(&["sequence", "--help"])), 0);
}

#[test]
fn precondition_failures_exit_two() {
    let out = weakseq(&["sequence", "--group", "Z5", "--multiset", "1^13", "--t", "2"]);
    assert_eq!(code(&out), 2);

    let out = weakseq(&["realize", "--group", "Z5", "--multiset", "1^11", "--t", "5"]);
    assert_eq!(code(&out), 2);

    let out = weakseq(&[
        "montecarlo", "--group", "Z101", "--t", "1", "--ell", "3", "--set-size", "2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn proven_impossible_exits_one() {
    let out = weakseq(&["realize", "--group", "Z4", "--multiset", "2^2", "--t", "2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn montecarlo_is_deterministic_per_seed() {
    let args = [
        "montecarlo", "--group", "Z101", "--t", "2", "--ell", "15", "--trials", "500",
        "--seed", "11",
    ];
    let a = weakseq(&args);
    let b = weakseq(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let v = json(&a);
    assert_eq!(v["within_three_std_err"], serde_json::json!(true));
    assert_eq!(v["set_size"], serde_json::json!(30));

    let csv = weakseq(&[
        "montecarlo", "--group", "Z101", "--t", "1", "--ell", "3", "--trials", "100",
        "--seed", "1", "--format", "csv",
    ]);
    let text = stdout(&csv);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "t, ell, bound_rational, bound_float, trials, mean_X, std_err");
    assert!(lines[1].starts_with("1, 3, 2/3, 0.666667, 100, "));
}

#[test]
fn env_seed_matches_flag_seed() {
    let flagged = weakseq(&[
        "sequence", "--group", "Z101", "--multiset", "1,2,3,4,5", "--t", "1", "--seed", "9",
    ]);
    let env = weakseq_env(
        &["sequence", "--group", "Z101", "--multiset", "1,2,3,4,5", "--t", "1"],
        "WEAKSEQ_SEED",
        "9",
    );
    assert_eq!(stdout(&flagged), stdout(&env));

    let bad = weakseq_env(
        &["sequence", "--group", "Z101", "--multiset", "1,2,3", "--t", "1"],
        "WEAKSEQ_SEED",
        "not-a-number",
    );
    assert_eq!(code(&bad), 3);
}

#[test]
fn cayley_table_group_works_end_to_end() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "5").unwrap();
    for a in 0..5u32 {
        let row: Vec<String> = (0..5u32).map(|b| ((a + b) % 5).to_string()).collect();
        writeln!(file, "{}", row.join(" ")).unwrap();
    }
    let spec = format!("cayley:{}", file.path().display());

    let out = weakseq(&["sequence", "--group", &spec, "--multiset", "1,2,3", "--t", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["verified"], serde_json::json!(true));

    let bad = weakseq(&["sequence", "--group", "cayley:/no/such/file", "--multiset", "1", "--t", "1"]);
    assert_eq!(code(&bad), 3);
}
