use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ukp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ukp"))
        .args(args)
        .output()
        .expect("running the ukp binary")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn write_instance(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn generate_then_solve_agrees_across_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inst.ukp");
    let generated = ukp(&[
        "generate",
        "--dist",
        "subset-sum",
        "--n",
        "12",
        "--seed",
        "5",
        "--w-min",
        "10",
        "--w-max",
        "80",
        "--c-min",
        "300",
        "--c-max",
        "400",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&generated), 0, "{}", String::from_utf8_lossy(&generated.stderr));
    let report = stdout_json(&generated);
    assert_eq!(report["command"], "generate");
    assert_eq!(report["n"], 12);

    let mut values = Vec::new();
    for alg in ["naive", "oso", "tso", "gfdp", "mtu1", "mtu2"] {
        let solved = ukp(&["solve", file.to_str().unwrap(), "--alg", alg, "--stats"]);
        assert_eq!(code(&solved), 0, "{alg}: {}", String::from_utf8_lossy(&solved.stderr));
        let report = stdout_json(&solved);
        assert_eq!(report["terminated_by"], "optimal");
        assert!(report["stats"].is_object(), "{alg} report lacks stats");
        assert_eq!(
            report["instance_sha256"],
            stdout_json(&ukp(&["solve", file.to_str().unwrap(), "--alg", "oso"]))
                ["instance_sha256"]
        );
        values.push(report["optimal_value"].as_i64().unwrap());
    }
    assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
}

#[test]
fn generation_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ukp");
    let b = dir.path().join("b.ukp");
    for path in [&a, &b] {
        let out = ukp(&[
            "generate",
            "--preset",
            "breq-128-16",
            "--n",
            "64",
            "--seed",
            "42",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn solve_timeout_still_reports_json_but_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("big.ukp");
    let out = ukp(&[
        "generate",
        "--dist",
        "subset-sum",
        "--n",
        "40",
        "--seed",
        "3",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let solved = ukp(&[
        "solve",
        file.to_str().unwrap(),
        "--alg",
        "naive",
        "--timeout",
        "0.001",
    ]);
    assert_eq!(code(&solved), 3);
    let report = stdout_json(&solved);
    assert_eq!(report["terminated_by"], "timeout");
    assert!(report["optimal_value"].is_i64());
}

#[test]
fn error_exit_codes_distinguish_usage_from_input() {
    // Unknown flag value: usage.
    let out = ukp(&["solve", "whatever.ukp", "--alg", "dijkstra"]);
    assert_eq!(code(&out), 1);
    // Analyze with nothing requested: usage.
    let out = ukp(&["analyze", "whatever.ukp"]);
    assert_eq!(code(&out), 1);
    // Missing file: input.
    let out = ukp(&["solve", "/nonexistent/path.ukp", "--alg", "oso"]);
    assert_eq!(code(&out), 2);
    // Malformed instance: input.
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.ukp");
    write_instance(&file, "n: 1\nc: 10\nbegin data\n5\nend data\n");
    let out = ukp(&["analyze", file.to_str().unwrap(), "--periodicity"]);
    assert_eq!(code(&out), 2);
    // Pricer without a float form: usage.
    let csp = dir.path().join("demands.txt");
    fs::write(&csp, "1\n10\n3 5\n").unwrap();
    let out = ukp(&[
        "colgen",
        csp.to_str().unwrap(),
        "--pricer",
        "mtu1",
        "--profit",
        "native",
    ]);
    assert_eq!(code(&out), 1);
    // Help exits clean.
    let out = ukp(&["--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn analyze_reports_dominance_and_periodicity_fields() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("graded.ukp");
    write_instance(
        &file,
        "n: 7\nc: 1000\nbegin data\n3 2\n5 5\n6 1\n12 9\n14 11\n16 13\n17 19\nend data\n",
    );
    let out = ukp(&[
        "analyze",
        file.to_str().unwrap(),
        "--dominance",
        "collective",
        "--periodicity",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["removed_count"], 4);
    assert_eq!(report["survivor_count"], 3);
    assert_eq!(report["removed"], serde_json::json!([2, 3, 4, 5]));
    assert_eq!(report["best_item"], 6);
    assert!(report["y_dprime"].is_u64());
    assert!(report["reduced_capacity"].as_u64().unwrap() <= 1000);
}

#[test]
fn bench_writes_csv_and_sidecar_and_prints_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 1..=2u64 {
        let file = dir.path().join(format!("i{seed}.ukp"));
        let out = ukp(&[
            "generate",
            "--dist",
            "subset-sum",
            "--n",
            "8",
            "--seed",
            &seed.to_string(),
            "--w-min",
            "5",
            "--w-max",
            "40",
            "--c-min",
            "100",
            "--c-max",
            "150",
            "-o",
            file.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let csv_path = dir.path().join("rows.csv");
    let pattern = dir.path().join("*.ukp");
    let out = ukp(&[
        "bench",
        "--instances",
        pattern.to_str().unwrap(),
        "--algs",
        "oso,mtu1",
        "--reps",
        "2",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dataset"), "{stdout}");

    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("instance_id,algorithm,rep,elapsed_s,terminated_by,optimal_value"));
    assert_eq!(lines.count(), 8);

    let sidecar: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rows.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["rows"].as_array().unwrap().len(), 8);
    assert_eq!(sidecar["config"]["reps"], 2);

    // An unknown algorithm name is a usage error.
    let out = ukp(&[
        "bench",
        "--instances",
        pattern.to_str().unwrap(),
        "--algs",
        "oso,quantum",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    // A pattern matching nothing is an input error.
    let out = ukp(&[
        "bench",
        "--instances",
        dir.path().join("none-*.ukp").to_str().unwrap(),
        "--algs",
        "oso",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn colgen_traces_a_nonincreasing_lp() {
    let dir = tempfile::tempdir().unwrap();
    let csp = dir.path().join("demands.txt");
    fs::write(&csp, "5\n100\n45 97\n36 610\n31 395\n14 211\n10 300\n").unwrap();
    let trace_path = dir.path().join("trace.csv");
    let out = ukp(&[
        "colgen",
        csp.to_str().unwrap(),
        "--pricer",
        "oso",
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["stopped_by"], "converged");
    let final_lp = report["lp_value"].as_f64().unwrap();
    assert!(final_lp > 0.0);

    let trace = fs::read_to_string(&trace_path).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next().unwrap(), "iteration,lp_value,master_s,pricing_s,improving");
    let lp_values: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(!lp_values.is_empty());
    assert!(lp_values.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{lp_values:?}");
    assert!((lp_values.last().unwrap() - final_lp).abs() <= 1e-9);

    // The two pricers land on the same relaxation value.
    let out = ukp(&["colgen", csp.to_str().unwrap(), "--pricer", "mtu1"]);
    assert_eq!(code(&out), 0);
    let mtu1_lp = stdout_json(&out)["lp_value"].as_f64().unwrap();
    assert!((mtu1_lp - final_lp).abs() <= 1e-6, "{mtu1_lp} vs {final_lp}");
}
