use std::path::PathBuf;

use ganz::certificates::Certificate;
use ganz::cli::{run, EXIT_DEGENERATE, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn ganz(args: &[&str]) -> (i32, String) {
    run(std::iter::once("ganz").chain(args.iter().copied()))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

#[test]
fn parse_prints_canonical_form() {
    let (code, out) = ganz(&["parse", "(x1^3 + x1^2)/(x1^2)"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "canonical"), Some("x1 + 1"));
    assert_eq!(field(&out, "nvars"), Some("1"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        &["parse", "x1 +"][..],
        &["val", "--h", "1/0"],
        &["sign", "--h", "x1"],
        &[
            "probe-integrality",
            "--h",
            "x1",
            "--set",
            "p: x1",
            "--eps-orders",
            "a,b",
        ],
        &["probe-integrality", "--h", "x1", "--set", "p: x1", "--radius", "2"],
        &["order-pipeline", "--set", "p: x1"],
        &["val", "--h", "x1 + x2", "--w", "1"],
        &["no-such-command"],
    ] {
        let (code, out) = ganz(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {out}");
    }
}

#[test]
fn val_and_sign_at_points() {
    let (code, out) = ganz(&["val", "--h", "x1^2 + eps", "--b", "1/eps"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "nu"), Some("-2"));
    let (_, out) = ganz(&["val", "--h", "x1 + eps*x2", "--w", "1,0"]);
    assert_eq!(field(&out, "value"), Some("1"));
    let (_, out) = ganz(&["sign", "--h", "x1 - 1", "--b", "1 - eps^3"]);
    assert_eq!(field(&out, "sign"), Some("-1"));
    let (_, out) = ganz(&["sign", "--h", "eps - 1/1000000"]);
    assert_eq!(field(&out, "sign"), Some("-1"));
}

#[test]
fn near_val_and_degenerate_direction() {
    let (code, out) = ganz(&["near-val", "--h", "x1^2 + eps", "--b", "0", "--d", "1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "value"), Some("(0, 1)"));
    let (code, _) = ganz(&["near-val", "--h", "x1", "--b", "0", "--d", "0"]);
    assert_eq!(code, EXIT_DEGENERATE);
    let (code, out) = ganz(&["near-val", "--h", "x1*x2 - 1", "--b", "1, 1", "--seed", "3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(field(&out, "d").is_some());
}

#[test]
fn radical_verification_of_shipped_files() {
    for name in [
        "radical_inv_1px2.json",
        "radical_x_over_1px2.json",
        "radical_unit_interval.json",
        "radical_localized.json",
    ] {
        let (code, out) = ganz(&["radical-verify", &data(name)]);
        assert_eq!(code, EXIT_OK, "{name}: {out}");
        assert_eq!(field(&out, "result"), Some("Valid"));
    }
    let (code, out) = ganz(&["radical-verify", &data("radical_invalid_x.json")]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(field(&out, "result"), Some("Invalid"));
    let (code, _) = ganz(&["radical-verify", &data("cone_unit_interval.json")]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = ganz(&["radical-verify", "/nonexistent.json"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn cone_search_output_verifies_as_a_file() {
    let (code, json) = ganz(&[
        "cone-search",
        "--set",
        "p: x1; 1 - x1",
        "--h",
        "x1 - x1^2",
        "--degree-bound",
        "2",
        "--format",
        "structured",
    ]);
    assert_eq!(code, EXIT_OK, "{json}");
    let cert = Certificate::from_json(&json).expect("certificate json");
    assert_eq!(cert.kind(), "cone");
    let path = std::env::temp_dir().join(format!("ganz-cone-{}.json", std::process::id()));
    std::fs::write(&path, &json).unwrap();
    let p = path.display().to_string();
    let (code, out) = ganz(&["cone-verify", &p]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "cone-value"), Some("-x1^2 + x1"));
    let (code, out) = ganz(&["cone-verify", &p, "--b", "1/2 + eps"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "result"), Some("Nonnegative"));
    let (code, _) = ganz(&["cone-verify", &p, "--b", "2"]);
    assert_eq!(code, EXIT_FAIL);
    std::fs::remove_file(&path).ok();
}

#[test]
fn cone_search_unknown_and_budget() {
    let (code, out) = ganz(&["cone-search", "--set", "p: x1", "--h", "x1^3", "--degree-bound", "1"]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    assert_eq!(field(&out, "result"), Some("Unknown"));
    let (code, _) = ganz(&["cone-search", "--set", "p: x1", "--h", "x1", "--degree-bound", "1000"]);
    assert_eq!(code, EXIT_DEGENERATE);
    let (code, _) = ganz(&["cone-search", "--set", "p: x1", "--h", "1/x1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn order_pipeline_outcomes() {
    let (code, out) = ganz(&["order-pipeline", "--set", "p: x1; x2; x1*x2", "--w", "1,0"]);
    assert_eq!(code, EXIT_OK, "{out}");
    for k in 1..=3 {
        assert_eq!(field(&out, &format!("sign(p{k})")), Some("+1"), "{out}");
    }
    let (code, out) = ganz(&["order-pipeline", "--set", "p: x1", "--b", "0"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "sign(p1)"), Some("+1"));
    let (code, out) = ganz(&["order-pipeline", "--set", "p: x2; -x2", "--w", "1,0"]);
    assert_eq!(code, EXIT_DEGENERATE, "{out}");
    assert_eq!(field(&out, "result"), Some("NotFound"));
    let (code, out) = ganz(&[
        "order-pipeline",
        "--set",
        "p: x1; 1 - x1",
        "--b",
        "1/2",
        "--generator",
        &data("cone_unit_interval.json"),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "checked-generators"), Some("1"));
}

#[test]
fn probes_report_witnesses_that_recheck() {
    let (code, out) = ganz(&[
        "probe-integrality",
        "--h",
        "1/x1",
        "--set",
        "p: x1",
        "--seed",
        "7",
        "--count",
        "200",
    ]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    let w = field(&out, "witness").unwrap();
    let (_, again) = ganz(&["val", "--h", "1/x1", "--b", w]);
    assert!(field(&again, "nu").unwrap().starts_with('-'), "{again}");

    let (code, out) = ganz(&[
        "probe-integrality",
        "--h",
        "1/(1 + x1^2)",
        "--set",
        "p: x1",
        "--grid-step",
        "1/2",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "result"), Some("NoViolationFound"));

    let (code, out) = ganz(&["probe-bounded", "--h", "x1", "--a", "1", "--set", "p: x1"]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    let (code, _) = ganz(&["probe-bounded", "--h", "x1", "--a", "0", "--set", "p: x1"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, out) = ganz(&["probe-integrality", "--h", "x1", "--set", "p: -1 - x1^2"]);
    assert_eq!(code, EXIT_DEGENERATE, "{out}");
}

#[test]
fn structured_reports_are_json() {
    let (code, out) = ganz(&["val", "--h", "eps^3", "--format", "structured"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = v["report"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["key"] == "nu" && e["value"] == "3"));
}

#[test]
fn selftest_single_criterion() {
    let (code, out) = ganz(&["selftest", "--criterion", "8"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(field(&out, "passed"), Some("1/1"));
    let (code, _) = ganz(&["selftest", "--criterion", "12"]);
    assert_eq!(code, EXIT_USAGE);
}
