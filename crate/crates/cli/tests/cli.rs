use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use charclass::genus::{genus_on_projective, CharSeries};
use charclass::ring::parse::parse_poly;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charclass")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn chi_y_genus_of_p4() {
    let out = run(&["genus", "--series", "hirzebruch", "--n", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "1 - y + y^2 - y^3 + y^4");
}

#[test]
fn genus_sweep_matches_library() {
    let out = run(&["genus", "--series", "lgenus", "--n", "4", "--sweep", "--output", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let f = CharSeries::by_name("lgenus", 16).unwrap();
    for (n, row) in rows.iter().enumerate() {
        let value = parse_poly(row["value"].as_str().unwrap()).unwrap();
        assert_eq!(value, genus_on_projective(&f, n).unwrap());
    }
}

#[test]
fn empty_sweep_table_has_header() {
    let out = run(&["genus", "--series", "todd", "--n", "0", "--sweep"]);
    assert_eq!(stdout(&out), "n  genus\n-  -----\n0  1\n");
}

#[test]
fn json_values_parse_back() {
    let out = run(&["k0", "eval", "(L - 1)^2*(L + 1)", "--output", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let e = parse_poly(v["E"].as_str().unwrap()).unwrap();
    assert_eq!(e, parse_poly("(u*v - 1)^2*(u*v + 1)").unwrap());
    assert_eq!(parse_poly(v["class"].as_str().unwrap()).unwrap(), parse_poly("(L - 1)^2*(L + 1)").unwrap());
    assert_eq!(v["euler"], "0");
}

#[test]
fn stringy_compare_blowup() {
    let out = run(&["stringy", "compare", &fx("identity.json"), &fx("blowup.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| !l.starts_with("all") && l.trim_end().ends_with("true")).count(), 4);
    assert!(text.contains("all equal: true"));
}

#[test]
fn stringy_compare_detects_difference() {
    let out = run(&["stringy", "compare", &fx("identity.json"), &fx("a1.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("all equal: false"));
}

#[test]
fn a1_invariants() {
    assert_eq!(stdout(&run(&["stringy", "efun", &fx("a1.json")])).trim(), "u*v + u^2*v^2");
    assert_eq!(stdout(&run(&["stringy", "euler", &fx("a1.json")])).trim(), "2");
    assert_eq!(stdout(&run(&["stringy", "chiy", &fx("a1.json")])).trim(), "-y + y^2");
}

#[test]
fn relative_contributions_sum_to_total() {
    let out = run(&["stringy", "integral", &fx("blowup.json"), "--relative"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("{E1}"));
    assert!(text.lines().last().unwrap().ends_with("L^2"));
}

#[test]
fn missing_file_is_io_error() {
    let path = fx("no_such_file.json");
    let out = run(&["stringy", "efun", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("no_such_file.json"));
}

#[test]
fn invalid_discrepancy_is_validation_error() {
    let out = run(&["stringy", "efun", &fx("bad_discrepancy.json"), "--output", "json"]);
    assert_eq!(code(&out), 3);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "validation");
}

#[test]
fn malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{ \"flavor\": ").unwrap();
    assert_eq!(code(&run(&["stringy", "efun", broken.to_str().unwrap()])), 3);

    let bad_expr = dir.path().join("bad_expr.json");
    fs::write(
        &bad_expr,
        r#"{"flavor":"stringy","components":[],"strata":[{"subset":[],"class":"L^2 + * 1"}]}"#,
    )
    .unwrap();
    let out = run(&["stringy", "efun", bad_expr.to_str().unwrap(), "--output", "json"]);
    assert_eq!(code(&out), 3);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "parse");
    assert_eq!(err["error"]["offset"], 6);

    let out = run(&["k0", "eval", "1/0"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn blowup_relation_and_control() {
    assert_eq!(code(&run(&["k0", "blowup-check", &fx("plane_blowup_relation.json")])), 0);
    assert_eq!(code(&run(&["k0", "blowup-check", &fx("plane_blowup_perturbed.json")])), 1);
}

#[test]
fn pushforward_chain() {
    let out = run(&["k0", "pushforward", &fx("blowdown_chain.json"), "--output", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["function"]["zero"], "2");
    assert_eq!(v["function"]["punctured"], "1");
    assert_eq!(v["euler_integral"], "2");
}

#[test]
fn towers() {
    assert_eq!(stdout(&run(&["pro", &fx("tower_euler.json")])).trim(), "2");
    assert_eq!(stdout(&run(&["pro", &fx("tower_arcs.json")])).trim(), "X");
}

#[test]
fn hrr_and_ty() {
    let out = run(&["hrr", "--n", "3", "--d", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("= 10\n"));
    assert_eq!(stdout(&run(&["ty", "--n", "2"])).trim(), "1 - y + y^2");
}

#[test]
fn jets() {
    let out = run(&["jets", "oracle", "--dim", "1", "--exponents", "1", "--pmax", "8", "--output", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["closed"]["value"], "L^2/(1 + L)");
    assert_eq!(v["verdict"], true);
    let m = run(&["jets", "measure", "--exponents", "1", "--p", "2"]);
    assert_eq!(stdout(&m).trim(), "L^-1 - L^-2");
    assert_eq!(code(&run(&["jets", "oracle", "--dim", "2", "--exponents", "1", "--pmax", "4"])), 3);
}

#[test]
fn order_must_be_positive() {
    assert_ne!(code(&run(&["genus", "--series", "todd", "--n", "1", "--order", "0"])), 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["stringy", "integral", &fx("two_divisors.json"), "--relative", "--output", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

/// Every shipped fixture runs to completion quickly.
#[test]
fn fixtures_run() {
    for entry in fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let p = path.to_str().unwrap();
        let args: Vec<&str> = match name.as_str() {
            "atoms.json" => vec!["k0", "eval", "C*S", "--atoms", p],
            n if n.starts_with("plane_blowup") => vec!["k0", "blowup-check", p],
            n if n.starts_with("tower") => vec!["pro", p],
            "blowdown_chain.json" => vec!["k0", "pushforward", p],
            _ => vec!["stringy", "euler", p],
        };
        let start = Instant::now();
        let out = run(&args);
        assert!(start.elapsed() < Duration::from_secs(5), "{name} is slow");
        let expected = match name.as_str() {
            "bad_discrepancy.json" => 3,
            "plane_blowup_perturbed.json" => 1,
            _ => 0,
        };
        assert_eq!(code(&out), expected, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
