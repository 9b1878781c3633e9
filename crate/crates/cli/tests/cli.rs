use std::process::{Command, Output};

use zonal_core::exactpoly::{factorial_rat, parse_rational, Rational};
use zonal_core::partitions::partitions_of;
use zonal_core::zonal::CoeffEngine;

fn zonal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonal")).args(args).output().expect("spawn zonal")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = zonal(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

#[test]
fn poly_outputs() {
    assert_eq!(
        stdout_ok(&["poly", "2,1", "--vars", "a,b,c"]).trim(),
        "12/5*a^2*b + 12/5*a^2*c + 12/5*a*b^2 + 18/5*a*b*c + 12/5*a*c^2 + 12/5*b^2*c + 12/5*b*c^2"
    );
    assert_eq!(stdout_ok(&["poly", "1", "--vars", "1"]).trim(), "y1");
    assert_eq!(
        stdout_ok(&["poly", "3,2", "--m-basis"]).trim(),
        "48/7*M(3,2) + 32/7*M(3,1,1) + 176/21*M(2,2,1) + 64/7*M(2,1,1,1) + 80/7*M(1,1,1,1,1)"
    );
    let json: serde_json::Value = serde_json::from_str(&stdout_ok(&["poly", "2", "--vars", "2", "--json"])).unwrap();
    assert_eq!(json["terms"][0]["exponents"], serde_json::json!([2, 0]));
    assert_eq!(json["terms"][0]["coefficient"], "1");
    assert_eq!(json["terms"][1]["coefficient"], "2/3");
}

#[test]
fn coeff_outputs_and_errors() {
    assert_eq!(stdout_ok(&["coeff", "5,4", "3,3,3"]).trim(), "82944/1925");
    assert_eq!(stdout_ok(&["coeff", "4", "4"]).trim(), "1");
    let out = zonal(&["coeff", "2", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = zonal(&["coeff", "x,1", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unordered_partition_is_sorted_with_warning() {
    let out = zonal(&["coeff", "1,3", "2,2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), stdout_ok(&["coeff", "3,1", "2,2"]).trim());
}

#[test]
fn table_outputs() {
    let one: serde_json::Value = serde_json::from_str(&stdout_ok(&["table", "1", "--json"])).unwrap();
    assert_eq!(one["coefficients"], serde_json::json!([["1"]]));
    let seven: serde_json::Value = serde_json::from_str(&stdout_ok(&["table", "7", "--json"])).unwrap();
    let ps = partitions_of(7);
    for (j, lambda) in ps.iter().enumerate() {
        let sum: Rational = (0..ps.len()).map(|i| q(seven["coefficients"][i][j].as_str().unwrap())).sum();
        assert_eq!(sum, Rational::from_integer(lambda.multinomial().into()));
    }
    let text = stdout_ok(&["table", "4"]);
    assert!(text.starts_with("κ\\λ"));
    assert_eq!(zonal(&["table", "0"]).status.code(), Some(2));
}

fn bits(pbm: &str) -> (usize, Vec<u8>) {
    let mut lines = pbm.lines();
    assert_eq!(lines.next(), Some("P1"));
    assert!(lines.next().unwrap().starts_with('#'));
    let size: usize = lines.next().unwrap().split(' ').next().unwrap().parse().unwrap();
    let bits = lines.flat_map(|l| l.bytes()).filter(|b| !b.is_ascii_whitespace()).collect();
    (size, bits)
}

#[test]
fn zeros_bitmaps() {
    let (size, b) = bits(&stdout_ok(&["zeros", "2"]));
    assert_eq!(size, 2);
    assert_eq!(b, b"0010");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z12.pbm");
    stdout_ok(&["zeros", "12", "--out", path.to_str().unwrap()]);
    let (size, b) = bits(&std::fs::read_to_string(&path).unwrap());
    let t = CoeffEngine::unpruned(12).table();
    assert_eq!(size, t.partitions().len());
    for (k, row) in t.rows().iter().enumerate() {
        for (l, v) in row.iter().enumerate() {
            let black = b[k * size + l] == b'1';
            assert_eq!(black, num_traits::Zero::is_zero(v), "cell ({k},{l})");
        }
    }
    let out = zonal(&["zeros", "3", "--out", "/nonexistent-dir/z.pbm"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn pfq_outputs() {
    assert_eq!(stdout_ok(&["pfq", "--eigs", "0", "--order", "5"]).trim(), "1");
    let want: Rational = (0..=6).map(|n| num_traits::pow(q("1/2"), n) / factorial_rat(n as u64)).sum();
    assert_eq!(q(stdout_ok(&["pfq", "--eigs", "1/2", "--order", "6"]).trim()), want);
    for args in [["--upper", "1/2,3/2"], ["--lower", "5/2"]] {
        let mut a = vec!["pfq", "--eigs", "-0.3", "--order", "9"];
        a.extend(args);
        let mut b = vec!["pfq-scalar", "--z", "-3/10", "--order", "9"];
        b.extend(args);
        assert_eq!(stdout_ok(&a), stdout_ok(&b));
    }
    let exact = stdout_ok(&["pfq", "--upper", "1/2,3/2", "--lower", "5/2", "--eigs", "1/10,1/5", "--order", "8"]);
    let float = stdout_ok(&["pfq", "--upper", "1/2,3/2", "--lower", "5/2", "--eigs", "0.1,0.2", "--order", "8", "--float"]);
    let e = num_traits::ToPrimitive::to_f64(&q(exact.trim())).unwrap();
    assert_eq!(float.trim().parse::<f64>().unwrap(), e);
    assert_eq!(zonal(&["pfq", "--lower", "-1", "--eigs", "1", "--order", "3"]).status.code(), Some(2));
    assert_eq!(zonal(&["pfq", "--eigs", "", "--order", "3"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    for args in [
        vec!["verify", "--suite", "trace", "--n-max", "8", "--m-max", "3"],
        vec!["verify", "--suite", "conjectures", "--a-max", "6"],
        vec!["verify", "--suite", "identities", "--a-max", "20"],
        vec!["verify", "--suite", "laplace", "--n-max", "5"],
        vec!["verify", "--suite", "wishart", "--n-max", "4", "--m-max", "2"],
        vec!["verify", "--suite", "closed-forms", "--n-max", "12"],
    ] {
        let json: serde_json::Value = serde_json::from_str(&stdout_ok(&args)).unwrap();
        assert_eq!(json["suite"], args[2]);
        assert_eq!(json["failures"], serde_json::json!([]));
        assert!(json["checked"].as_u64().unwrap() > 0);
        assert!(json["range"].is_object());
    }
    assert_eq!(zonal(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn wishart_report() {
    let args = ["wishart", "--n", "4", "--m", "2", "--nu", "3", "--samples", "20000", "--seed", "42", "--y", "1,1"];
    let text = stdout_ok(&args);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["targets", "means", "stderrs", "zscores", "pass"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["targets"], serde_json::json!([5760.0, 720.0, 120.0]));
    assert_eq!(json["pass"], true);
    let mut threaded = vec!["--threads", "1"];
    threaded.extend(args);
    assert_eq!(stdout_ok(&threaded), text);
    let default_y: serde_json::Value =
        serde_json::from_str(&stdout_ok(&["wishart", "--n", "2", "--m", "2", "--nu", "2", "--samples", "2000"])).unwrap();
    assert_eq!(default_y["y"], serde_json::json!(["1", "2"]));
}

#[test]
fn output_independent_of_thread_count() {
    let one = stdout_ok(&["--threads", "1", "table", "9", "--json"]);
    let four = stdout_ok(&["--threads", "4", "table", "9", "--json"]);
    assert_eq!(one, four);
    let one = stdout_ok(&["--threads", "1", "verify", "--suite", "closed-forms", "--n-max", "10"]);
    let four = stdout_ok(&["--threads", "4", "verify", "--suite", "closed-forms", "--n-max", "10"]);
    assert_eq!(one, four);
}
