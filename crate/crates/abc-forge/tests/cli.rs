use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abc-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "1", "8", "9"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "1", "2", "3"]).status.code(), Some(1));
    // shared factor
    assert_eq!(run(&["verify", "2", "4", "6"]).status.code(), Some(2));
    // wrong sum
    assert_eq!(run(&["verify", "1", "2", "5"]).status.code(), Some(2));
    // a > b
    assert_eq!(run(&["verify", "8", "1", "9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "x", "2", "3"]).status.code(), Some(64));
}

#[test]
fn verify_accepts_factored_form() {
    let out = run(&["--format", "json", "verify", "2", "3^10*109", "23^5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["c"], "6436343");
    assert_eq!(v["verified"], "yes");
    let q = v["quality"].as_f64().unwrap();
    assert!((q - 1.62991).abs() < 1e-5);
}

#[test]
fn search_json_and_csv() {
    let out = run(&["--format", "json", "search", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|v| v["verified"] == "yes"));

    let out = run(&["--format", "csv", "search", "100"]);
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("c,h,n,cumulative"));
    assert_eq!(lines.last(), Some("81,2,27,6"));
}

#[test]
fn generate_phi_stream_and_footer() {
    let out = run(&[
        "--format", "json", "generate", "phi", "1", "8", "9", "--d1", "1", "--d2", "2",
        "--count", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 4);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["record"]["c"], "9");
    let footer: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
    assert_eq!(footer["growth_report"]["members"], 3);
}

#[test]
fn generate_rejects_non_hit_base() {
    let out = run(&["generate", "phi", "1", "2", "3", "--d2", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn no_hit_check_exit_codes() {
    assert_eq!(run(&["no-hit-check", "100"]).status.code(), Some(0));
    assert_eq!(run(&["no-hit-check", "9"]).status.code(), Some(1));
}

#[test]
fn domain_json_shape() {
    let out = run(&["--format", "json", "domain", "675"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["report"]["q_part"], "45");
    assert_eq!(v["report"]["g"], "15");
    assert_eq!(v["equation_count"]["total"], 27);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "--format", "json", "--seed", "7", "generate", "psi", "5", "27", "32", "--d1", "5",
        "--d3", "2", "--count", "8", "--show-rejects",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());
}
