use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ffsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffsq"))
        .args(args)
        .env_remove("FFSQ_MAX_ENUM")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = ffsq(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Checks required keys and the absence of unlisted ones.
fn conforms(value: &Value, schema: &Value) {
    let obj = value.as_object().unwrap();
    let props = schema["properties"].as_object().unwrap();
    for key in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    for key in obj.keys() {
        assert!(props.contains_key(key), "unexpected {key}");
    }
}

#[test]
fn represent_examples() {
    let out = ffsq(&["represent", "--p", "3", "--f", "1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("b_q = true"), "{text}");
    assert!(text.contains("A = T + 1, B = 1"), "{text}");

    let v = json(&["represent", "--p", "3", "--f", "2,1", "--format", "json"]);
    assert_eq!(v["b_q"], false);
    assert!(v["witness"].is_null());
    assert_eq!(v["factors"][0]["inert"], true);

    let v = json(&["represent", "--p", "3", "--f", "1,0,1", "--format", "json"]);
    assert_eq!(v["witness"]["a"], "1,1");
    assert_eq!(v["witness"]["b"], "1");
}

#[test]
fn parse_and_usage_errors_exit_one() {
    assert_eq!(
        ffsq(&["represent", "--p", "3", "--f", "1,,x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ffsq(&["represent", "--p", "4", "--f", "1,1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ffsq(&["interval", "--p", "3", "--n", "4"]).status.code(),
        Some(1)
    );
    assert_eq!(ffsq(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        ffsq(&[
            "interval",
            "--p",
            "3",
            "--n",
            "4",
            "--m",
            "1",
            "--mode",
            "monte-carlo"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(ffsq(&["--help"]).status.code(), Some(0));
}

#[test]
fn guards_exit_two() {
    let out = ffsq(&["interval", "--p", "3", "--k", "4", "--n", "9", "--m", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ffsq"))
        .args(["global", "--p", "3", "--n", "4"])
        .env("FFSQ_MAX_ENUM", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(ffsq(&["group", "--n", "9"]).status.code(), Some(2));
    assert_eq!(
        ffsq(&["global", "--p", "3", "--k", "13", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn interval_report() {
    let v = json(&[
        "interval",
        "--p",
        "3",
        "--n",
        "5",
        "--m",
        "0",
        "--f0",
        "0,0,0,0,0,1",
    ]);
    assert_eq!(
        (v["mean_num"].as_str(), v["mean_den"].as_str()),
        (Some("2"), Some("3"))
    );
    conforms(&v, &schema("report.schema.json"));
    let v = json(&[
        "interval",
        "--p",
        "3",
        "--k",
        "2",
        "--f0",
        "T^4",
        "--epsilon",
        "1/2",
    ]);
    assert_eq!(v["m"], 2);
    assert_eq!(v["epsilon"], "1/2");
    assert_eq!(v["total"], 729);
}

#[test]
fn group_densities_agree() {
    let v = json(&["group", "--n", "5", "--format", "json"]);
    assert_eq!(v["enumerated"], v["partition_sum"]);
    assert_eq!(v["partition_sum"], v["closed_form"]);
    assert_eq!(v["closed_form"], "63/256");
    assert_eq!(v["all_equal"], true);
}

#[test]
fn affine_report_carries_both_references() {
    let v = json(&["affine", "--p", "3", "--nu", "2"]);
    assert_eq!(v["total"], 6561);
    assert_eq!(
        (v["reference_num"].as_str(), v["reference_den"].as_str()),
        (Some("713"), Some("4096"))
    );
    assert_eq!(
        (v["c_p_num"].as_str(), v["c_p_den"].as_str()),
        (Some("713"), Some("4096"))
    );
    assert_eq!(v["binom_ref_num"], "12155");
    assert_eq!(v["binom_ref_den"], "65536");
    assert_eq!(v["nu"], 2);
    conforms(&v, &schema("report.schema.json"));
}

#[test]
fn csv_headers_are_stable() {
    let out = ffsq(&["global", "--p", "5", "--n", "3", "--format", "csv"]);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "q,p,k,n,m,epsilon,f0,total,hits,mean_num,mean_den,reference_num,reference_den,deviation_decimal,mode,seed,skipped"
    );
    let out = ffsq(&[
        "chebotarev",
        "--p",
        "3",
        "--k",
        "2",
        "--n",
        "3",
        "--m",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&out).lines().next().unwrap(),
        "signed_type,count,probability_num,probability_den,theoretical_num,theoretical_den"
    );
}

#[test]
fn histogram_json_conforms() {
    let v = json(&[
        "chebotarev",
        "--p",
        "3",
        "--k",
        "3",
        "--f0",
        "T^3",
        "--m",
        "1",
    ]);
    conforms(&v, &schema("histogram.schema.json"));
    assert_eq!(v["total"], 729);
}

#[test]
fn output_is_independent_of_workers() {
    let base = [
        "interval",
        "--p",
        "5",
        "--k",
        "2",
        "--n",
        "4",
        "--m",
        "2",
        "--mode",
        "monte-carlo",
        "--samples",
        "3000",
        "--seed",
        "5",
    ];
    let run = |w: &str| {
        let mut args = base.to_vec();
        args.extend(["--workers", w]);
        ffsq(&args).stdout
    };
    let one = run("1");
    assert_eq!(run("2"), one);
    assert_eq!(run("8"), one);
    assert_eq!(run("1"), one);
}

#[test]
fn writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("ffsq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = ffsq(&[
        "global",
        "--p",
        "3",
        "--n",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}
