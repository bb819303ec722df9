use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn maclab(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maclab"));
    cmd.args(args).env_remove("MACLAB_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("MACLAB_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn macdonald_two_row_expansion() {
    let o = maclab(
        &[
            "macdonald",
            "--n",
            "2",
            "--lambda",
            "2,0",
            "--output",
            "json",
        ],
        None,
    );
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["object"], "macdonald-p");
    let terms = v["value"]["terms"].as_array().unwrap();
    let parts: Vec<&Value> = terms.iter().map(|t| &t["partition"]).collect();
    assert_eq!(parts, [&serde_json::json!([2]), &serde_json::json!([1, 1])]);
    // m_(2) has coefficient one.
    assert_eq!(terms[0]["coef"]["den"], serde_json::json!([]));
    assert_eq!(terms[0]["coef"]["num"]["terms"][0]["coef"], "1");
}

/// Coefficients are not brought to lowest terms, so only the supports are
/// compared here; exact equality is covered by `verify tableau`.
#[test]
fn tableau_and_oracle_methods_have_the_same_support() {
    let support = |method: &str| -> Vec<Value> {
        let o = maclab(
            &[
                "macdonald",
                "--n",
                "3",
                "--lambda",
                "2,1",
                "--method",
                method,
                "--output",
                "json",
            ],
            None,
        );
        assert!(o.status.success());
        json(&o)["value"]["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["partition"].clone())
            .collect()
    };
    assert_eq!(support("tableau"), support("oracle"));
}

#[test]
fn shir_passes_with_exit_zero() {
    let o = maclab(
        &[
            "verify", "shir", "--n", "2", "--degree", "3", "--output", "json",
        ],
        None,
    );
    assert!(o.status.success());
    assert_eq!(json(&o)["status"], "PASSED");
}

#[test]
fn failing_check_exits_nonzero_with_witnesses() {
    let o = maclab(&["verify", "printed-c3", "--output", "json"], None);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["status"], "FAILED");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
    let fixed = maclab(&["verify", "printed-c3", "--corrected"], None);
    assert!(fixed.status.success());
}

#[test]
fn invalid_config_exits_two() {
    let o = maclab(&["global", "h", "--n", "3", "--weight", "1"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = maclab(&["laumon", "verify", "hp", "--weight", "1"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = maclab(&["macdonald", "--n", "2", "--lambda", "1,2"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn probabilistic_mode_never_passes() {
    let o = maclab(
        &[
            "verify",
            "cn",
            "--max-entry",
            "1",
            "--max-n",
            "3",
            "--equality",
            "probabilistic",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("PREVIEW"));
}

/// `(z1 + z2) / (1 - q)` through total (q,t)-degree 2.
#[test]
fn global_h_at_fundamental_weight() {
    let o = maclab(
        &[
            "global",
            "h",
            "--n",
            "2",
            "--weight",
            "1",
            "--order",
            "2",
            "--alpha-max",
            "5",
            "--output",
            "json",
        ],
        None,
    );
    assert!(o.status.success());
    let v = json(&o);
    let poly = &v["value"]["series"]["poly"];
    assert_eq!(poly["vars"], serde_json::json!(["q", "t", "z1", "z2"]));
    let mut got: Vec<(Vec<i64>, String)> = poly["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let e = t["exp"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect();
            (e, t["coef"].as_str().unwrap().to_string())
        })
        .collect();
    got.sort();
    let mut want = Vec::new();
    for a in 0..=2 {
        want.push((vec![a, 0, 0, 1], "1".to_string()));
        want.push((vec![a, 0, 1, 0], "1".to_string()));
    }
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn output_is_independent_of_thread_count() {
    for args in [
        &[
            "verify",
            "tableau",
            "--max-size",
            "3",
            "--max-n",
            "3",
            "--output",
            "json",
        ][..],
        &[
            "global", "verify", "hp", "--weight", "1,0", "--output", "json",
        ][..],
        &[
            "laumon", "j", "--n", "3", "--degree", "2", "--output", "json",
        ][..],
    ] {
        let one = maclab(&[&["--threads", "1"], args].concat(), None);
        let many = maclab(&[&["--threads", "8"], args].concat(), None);
        assert!(one.status.success(), "{args:?}");
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
}

#[test]
fn cache_hits_and_repairs_are_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "laumon", "limit", "--n", "2", "--order", "2", "--output", "json",
    ];
    let fresh = maclab(&args, None);
    assert!(fresh.status.success());
    let miss = maclab(&args, Some(dir.path()));
    let entries: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(entries.len(), 1);
    let hit = maclab(&args, Some(dir.path()));
    assert!(String::from_utf8_lossy(&hit.stderr).contains("cache hit"));
    assert_eq!(fresh.stdout, miss.stdout);
    assert_eq!(fresh.stdout, hit.stdout);

    let entry = &entries[0];
    let good = fs::read_to_string(entry).unwrap();
    fs::write(entry, good.replacen("\"coef\":\"1\"", "\"coef\":\"2\"", 1)).unwrap();
    let repaired = maclab(&args, Some(dir.path()));
    assert!(String::from_utf8_lossy(&repaired.stderr).contains("discarded"));
    assert_eq!(fresh.stdout, repaired.stdout);
    assert_eq!(fs::read_to_string(entry).unwrap(), good);

    fs::write(entry, "not json").unwrap();
    let repaired = maclab(&args, Some(dir.path()));
    assert_eq!(fresh.stdout, repaired.stdout);
    assert_eq!(fs::read_to_string(entry).unwrap(), good);
}

#[test]
fn cached_reports_keep_their_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "verify",
        "printed-c3",
    ];
    let first = maclab(&args, None);
    let second = maclab(&args, None);
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(second.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout);
}
