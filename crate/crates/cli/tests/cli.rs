use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smale-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert_eq!(
        code(out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn quotients_inline() {
    let v = json(&run(&["quotients", "--zeros", "0,0.5", "--no-meta"]));
    assert_eq!(v["command"], "quotients");
    assert!((f(&v["result"]["S"]) - 0.5358984).abs() < 1e-7);
    assert_eq!(v["result"]["S"], v["result"]["T"]);
    assert_eq!(v["config"]["zeros"][1]["re"], 0.5);
    assert!(v.get("meta").is_none());
}

#[test]
fn quotients_negative_leading_zero() {
    let v = json(&run(&["quotients", "--zeros", "-0.3+0.1i,0", "--no-meta"]));
    assert_eq!(v["result"]["degree"], 2);
}

#[test]
fn meta_present_by_default() {
    let v = json(&run(&["quotients", "--zeros", "0,0.5"]));
    assert!(v["meta"]["elapsed_seconds"].is_number());
    assert!(v["meta"]["version"].is_string());
}

#[test]
fn exit_codes() {
    let out = run(&["quotients", "--zeros", "0,0,0.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("derivative vanishes"));

    let out = run(&["quotients", "--zeros", "0,0.5,x"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("item 3 at column 7"),
        "{}",
        stderr(&out)
    );

    assert_eq!(code(&run(&["quotients", "--zeros", "0.5,0.2"])), 2);
    assert_eq!(code(&run(&["quotients", "--zeros", "0,1.5"])), 2);
    assert_eq!(code(&run(&["quotients"])), 1);
    assert_eq!(code(&run(&["bogus"])), 1);
    assert_eq!(
        code(&run(&["family", "thm2", "--n", "2", "--alpha", "0.999999"])),
        2
    );
    assert_eq!(code(&run(&["family", "thm4", "--n", "1", "--a", "0.5"])), 2);
    assert_eq!(code(&run(&["rescale", "--zeros", "1", "--m", "1"])), 2);
    assert_eq!(code(&run(&["rescale", "--zeros", "0", "--m", "10"])), 2);
    assert_eq!(code(&run(&["search", "kn", "--n", "13"])), 2);
    assert_eq!(code(&run(&["verify", "--n", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--n", "two"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("b.json");
    let v = json(&run(&[
        "family",
        "thm4",
        "--n",
        "2",
        "--a",
        "0.5",
        "--no-meta",
        "--product-out",
        path(&file),
    ]));
    let emitted = f(&v["result"]["numeric_value"]);

    let w = json(&run(&["quotients", "--file", path(&file), "--no-meta"]));
    assert!((f(&w["result"]["T"]) - 0.625).abs() < 1e-12);
    assert!((f(&w["result"]["T"]) - emitted).abs() <= 1e-12);
    assert_eq!(w["result"]["product"], v["result"]["product"]);
}

#[test]
fn search_product_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("best.json");
    let v = json(&run(&[
        "search",
        "kn",
        "--n",
        "3",
        "--restarts",
        "8",
        "--budget",
        "300",
        "--seed",
        "5",
        "--no-meta",
        "--product-out",
        path(&file),
    ]));
    assert_eq!(v["result"]["certificate_valid"], true);
    let w = json(&run(&["quotients", "--file", path(&file), "--no-meta"]));
    assert!((f(&w["result"]["S"]) - f(&v["result"]["best_value"])).abs() <= 1e-12);
}

#[test]
fn bad_product_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"degree\": 2, \"zeros\": [{\"re\": 0}]}").unwrap();
    let out = run(&["quotients", "--file", path(&file)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    std::fs::write(
        &file,
        "{\"degree\": 2, \"zeros\": [{\"re\": 0, \"im\": 0}]}",
    )
    .unwrap();
    assert_eq!(code(&run(&["quotients", "--file", path(&file)])), 1);

    assert_eq!(
        code(&run(&["quotients", "--file", "/nonexistent/b.json"])),
        1
    );
}

#[test]
fn family_thm2() {
    let v = json(&run(&[
        "family",
        "thm2",
        "--n",
        "3",
        "--alpha",
        "0.7",
        "--no-meta",
    ]));
    let r = &v["result"];
    assert!((f(&r["closed_value"]) - 0.687268).abs() < 1e-6);
    assert!(f(&r["difference"]).abs() <= 1e-8);
    assert_eq!(r["within_tolerance"], true);
    assert_eq!(r["closed_critical_points"].as_array().unwrap().len(), 2);
    assert!((f(&r["beta"]) - 0.49).abs() < 1e-15);
}

#[test]
fn family_thm4() {
    let v = json(&run(&[
        "family",
        "thm4",
        "--n",
        "3",
        "--a",
        "0.5",
        "--no-meta",
    ]));
    assert_eq!(f(&v["result"]["closed_value"]), 0.4375);
    assert_eq!(v["result"]["functional"], "T");
    assert_eq!(v["config"]["tol"], 1e-8);
}

#[test]
fn verify_reports_bounds() {
    let v = json(&run(&[
        "verify",
        "--n",
        "2",
        "--samples",
        "1",
        "--seed",
        "7",
        "--no-meta",
    ]));
    let r = &v["result"];
    assert_eq!(r["assertions_pass"], true);
    assert!((f(&r["bounds"][0]["thm1_bound"]) - 2.1666667).abs() < 1e-7);
    let checks = r["checks"].as_array().unwrap();
    let thm1 = checks.iter().find(|c| c["id"] == "thm1_upper").unwrap();
    assert_eq!(thm1["samples"], 1);
    assert_eq!(v["config"]["battery"]["degrees"], serde_json::json!([2]));
}

#[test]
fn verify_injected_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("a99.json");
    std::fs::write(
        &file,
        r#"[{"degree": 2, "rotation": 0.0, "zeros": [{"re": 0.0, "im": 0.0}, {"re": 0.99, "im": 0.0}]}]"#,
    )
    .unwrap();
    let args = [
        "verify",
        "--n",
        "2",
        "--samples",
        "4",
        "--seed",
        "7",
        "--no-meta",
        "--include-file",
    ];
    let mut both = args.to_vec();
    both.push(path(&file));
    let v = json(&run(&both));
    let prop1 = &v["result"]["prop1"];
    let entry = prop1["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["product"]["zeros"][1]["re"] == 0.99)
        .expect("injected product reported");
    assert!((f(&entry["report"]["S"]) - 0.8763725).abs() < 1e-6);
    assert!((f(&entry["report"]["r"]) - 0.752745).abs() < 1e-6);
    assert_eq!(
        entry["report"]["discrepancies"][0]["inequality"],
        "first_stated"
    );
    assert_eq!(v["result"]["included_products"], 1);

    let mut koebe = both.clone();
    koebe.extend(["--bound-variant", "koebe4"]);
    let v = json(&run(&koebe));
    assert_eq!(v["result"]["prop1"]["stated_bound_column"], false);
    assert!(v["result"]["prop1"]["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["product"]["zeros"][1]["re"] != 0.99));
}

#[test]
fn rescale_convergence() {
    let v = json(&run(&[
        "rescale",
        "--zeros",
        "1",
        "--m",
        "10,100",
        "--no-meta",
    ]));
    let rows = v["result"]["rows"].as_array().unwrap();
    assert!(f(&rows[0]["identity_residual"]) <= 1e-10);
    assert!((f(&rows[0]["distance"]) - 1.256e-3).abs() < 1e-5);
    assert!((f(&rows[1]["distance"]) - 1.25e-5).abs() < 1e-7);
    let ratio = f(&rows[1]["ratio"]);
    assert!((80.0..=120.0).contains(&ratio), "{ratio}");
    assert_eq!(f(&rows[1]["expected_ratio"]), 100.0);
    assert!(rows[0]["ratio"].is_null());
}

#[test]
fn rescale_two_zeros() {
    let v = json(&run(&[
        "rescale",
        "--zeros",
        "1,-1",
        "--m",
        "50",
        "--no-meta",
    ]));
    let poly = v["result"]["polynomial_quotients"].as_array().unwrap();
    assert!(poly.iter().all(|q| (f(q) - 2.0 / 3.0).abs() < 1e-12));
    let row = &v["result"]["rows"][0];
    assert!(f(&row["distance"]) < 1e-3);
    for c in row["critical"].as_array().unwrap() {
        assert!((f(&c["blaschke_quotient"]) - 2.0 / 3.0).abs() < 1e-3);
    }
}

#[test]
fn search_levels() {
    let v = json(&run(&[
        "search",
        "kn",
        "--n",
        "2",
        "--seed",
        "1",
        "--no-meta",
    ]));
    let best = f(&v["result"]["best_value"]);
    assert!(best > 0.99 && best < 1.0, "{best}");
    assert_eq!(v["result"]["objective"], "max_S");

    let v = json(&run(&[
        "search",
        "ln",
        "--n",
        "2",
        "--seed",
        "1",
        "--no-meta",
    ]));
    let best = f(&v["result"]["best_value"]);
    assert!(best > 0.5 && best < 0.51, "{best}");

    let v = json(&run(&[
        "search",
        "ln",
        "--n",
        "5",
        "--seed",
        "1",
        "--restarts",
        "10",
        "--budget",
        "400",
        "--no-meta",
    ]));
    assert!(f(&v["result"]["best_value"]) > 4f64.powi(-5));
    assert_eq!(v["result"]["certificate_valid"], true);
}

#[test]
fn identical_config_identical_bytes() {
    for args in [
        &[
            "verify",
            "--n",
            "2..3",
            "--samples",
            "20",
            "--seed",
            "3",
            "--no-meta",
        ][..],
        &[
            "search",
            "kn",
            "--n",
            "3",
            "--restarts",
            "6",
            "--budget",
            "200",
            "--seed",
            "2",
            "--no-meta",
        ][..],
        &[
            "rescale",
            "--zeros",
            "1,0.5i",
            "--m",
            "10,20",
            "--format",
            "csv",
            "--no-meta",
        ][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0, "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn csv_one_quotient_per_row() {
    let out = run(&[
        "quotients",
        "--zeros",
        "0,0.7,-0.7",
        "--format",
        "csv",
        "--no-meta",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[0], "product_id");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| &r[0] == "inline"));
    let s: f64 = rows[0][6].parse().unwrap();
    assert!((s - 0.68726773895690).abs() < 1e-12);
    assert!(text.starts_with("# command: quotients\n# config: {"));
}

#[test]
fn out_path() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = run(&[
        "quotients",
        "--zeros",
        "0,0.5",
        "--out",
        path(&file),
        "--no-meta",
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["config"]["out"], path(&file));
}

#[test]
fn seventeen_digit_numbers() {
    let out = run(&["quotients", "--zeros", "0,0.5", "--no-meta"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"S\": 0.53589838486224550"), "{text}");
}
