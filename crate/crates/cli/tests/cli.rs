use rrtomb_core::rational::{fmt_sci, fmt_sig, parse_q};
use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn rrtomb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrtomb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON record per line"))
        .collect()
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn analyze_prints_headline_figures() {
    let o = rrtomb(&["analyze"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for needle in [
        "observed_rr",
        "1.449e-8",
        "0.9060",
        "5.491e-7",
        "0.0006041",
        "1.981e12",
    ] {
        assert!(out.contains(needle), "missing {needle} in\n{out}");
    }
}

#[test]
fn records_carry_exact_fractions_that_round_trip() {
    let o = rrtomb(&["--format", "records", "analyze"]);
    assert!(o.status.success());
    let rec = &records(&o)[0];
    assert_eq!(rec["record"], "analyze");
    let mut checked = 0;
    for (key, v) in rec.as_object().unwrap() {
        let (Some(exact), Some(decimal)) = (v.get("exact"), v.get("decimal")) else {
            continue;
        };
        let q = parse_q(exact.as_str().unwrap()).unwrap();
        let d = decimal.as_str().unwrap();
        let again = if d.contains('e') {
            fmt_sci(&q, 4)
        } else {
            fmt_sig(&q, 4)
        };
        assert_eq!(again, d, "{key}");
        checked += 1;
    }
    assert_eq!(checked, 7);
    assert_eq!(rec["adjusted_area"]["decimal"], "0.0006041");
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let a = rrtomb(&["--format", "records", "--threads", "1", "analyze"]);
    let b = rrtomb(&["--format", "records", "--threads", "4", "analyze"]);
    let c = rrtomb(&["--format", "records", "--sequential", "analyze"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn missing_hypothesis_file_is_a_config_error() {
    let o = rrtomb(&["analyze", "--hypothesis", "/nonexistent/hypothesis.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("/nonexistent/hypothesis.toml"), "{err}");
}

#[test]
fn malformed_config_and_bad_values_are_config_errors() {
    let f = temp("[output]\nformat = \"xml\"\n");
    assert_eq!(
        rrtomb(&["--config", f.path().to_str().unwrap(), "analyze"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rrtomb(&["analyze", "--bonus-divisor", "1/2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rrtomb(&["--threads", "0", "analyze"]).status.code(),
        Some(2)
    );
    assert_eq!(rrtomb(&["infer"]).status.code(), Some(2));
}

#[test]
fn unscoreable_observed_tomb_is_a_contract_violation() {
    let base = rrtomb_core::config::BUNDLED_BASELINE.replace(
        "singletons = [\"Yoseh\", \"Other\"]",
        "singletons = [\"Yoseh\", \"Yeshua\"]",
    );
    let f = temp(&base);
    let o = rrtomb(&["analyze", "--hypothesis", f.path().to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn flags_override_config_file() {
    let f = temp("[rules]\nbonus_divisor = 1\n[output]\nformat = \"records\"\n");
    let path = f.path().to_str().unwrap();
    let rec = &records(&rrtomb(&["--config", path, "analyze"]))[0];
    assert_eq!(rec["adjusted_area"]["decimal"], "0.0007261");
    let rec = &records(&rrtomb(&[
        "--config",
        path,
        "analyze",
        "--bonus-divisor",
        "6/5",
    ]))[0];
    assert_eq!(rec["adjusted_area"]["decimal"], "0.0006041");
}

#[test]
fn sweep_reports_every_bundled_scenario() {
    let o = rrtomb(&["--format", "records", "sweep"]);
    let recs = records(&o);
    assert_eq!(recs.len(), 43);
    assert!(recs.iter().all(|r| r.get("error").is_none()));
    let matched = recs.iter().filter(|r| r["match"] == true).count();
    assert_eq!(matched, 35);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sweep_isolates_a_bad_scenario() {
    let suite = temp(
        r#"
[[scenario]]
name = "ok"
printed = "0.0006041"

[[scenario]]
name = "bad"
deltas = [{ remove = "Nobody" }]

[[scenario]]
name = "also ok"
deltas = [{ bonus_divisor = 1 }]
printed = "0.000726"
"#,
    );
    let o = rrtomb(&[
        "--format",
        "records",
        "sweep",
        "--suite",
        suite.path().to_str().unwrap(),
    ]);
    let recs = records(&o);
    assert_eq!(recs.len(), 3);
    assert_eq!(recs[0]["match"], true);
    assert!(recs[1]["error"].as_str().unwrap().contains("Nobody"));
    assert_eq!(recs[2]["match"], true);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_suite_prints_header_only() {
    let suite = temp("");
    let o = rrtomb(&["sweep", "--suite", suite.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn demography_defaults() {
    let out = stdout(&rrtomb(&["demography"]));
    for (k, v) in [
        ("deceased_per_gender", "66100"),
        ("adult_jewish ", "36420"),
        ("inscribed_males", "4370"),
        ("inscribed_females", "2185"),
        ("trials ", "1100"),
    ] {
        let line = out
            .lines()
            .find(|l| l.starts_with(k))
            .unwrap_or_else(|| panic!("{k} in\n{out}"));
        assert!(line.trim_end().ends_with(v), "{line}");
    }
}

#[test]
fn infer_reproduces_odds_and_bounds() {
    let o = rrtomb(&[
        "--format", "records", "infer", "--q", "5.491e-7", "--theta", "1", "--theta", "1/2",
        "--theta", "1/10", "--alpha", "0.05", "--alpha", "0.01",
    ]);
    assert!(o.status.success());
    let recs = records(&o);
    let get = |q: &str, arg: &str| -> String {
        recs.iter()
            .find(|r| {
                r["quantity"] == q && r.get("argument").and_then(Value::as_str).unwrap_or("") == arg
            })
            .unwrap_or_else(|| panic!("{q} {arg}"))["value"]["decimal"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(get("posterior_odds", "theta=1"), "1657");
    assert_eq!(get("theta_bound", "alpha=1/20"), "0.0494");
    assert_eq!(get("odds_bound", "alpha=1/20"), "81.90");
    assert_eq!(get("odds_bound", "alpha=1/100"), "15.58");
}

#[test]
fn validate_config_checks_referenced_files() {
    let good = temp("[sweep]\nsuite = \"bundled\"\n");
    assert!(rrtomb(&["validate-config", good.path().to_str().unwrap()])
        .status
        .success());
    let bad = temp("[sweep]\nsuite = \"/nonexistent/suite.toml\"\n");
    assert_eq!(
        rrtomb(&["validate-config", bad.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let typo = temp("[sweeps]\nsuite = \"bundled\"\n");
    assert_eq!(
        rrtomb(&["validate-config", typo.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
