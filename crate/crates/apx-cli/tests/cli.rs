//! End-to-end CLI checks: formats round-trip, runs are deterministic, and
//! verify's exit status tracks the report.

use std::path::Path;
use std::process::Command;

fn apx() -> Command {
    Command::new(env!("CARGO_BIN_EXE_apx"))
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().expect("spawn apx");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        run_ok(
            apx()
                .args([
                    "gen", "--family", "gnp", "--n", "100", "--p", "0.05", "--seed", "7", "--out",
                ])
                .arg(out),
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let head = std::fs::read_to_string(&a).unwrap();
    let first = head.lines().next().unwrap();
    assert_eq!(first, "100 228");
}

#[test]
fn grid_family_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("grid.txt");
    run_ok(
        apx()
            .args(["gen", "--family", "grid", "--n", "9", "--out"])
            .arg(&p),
    );
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().next().unwrap(), "9 12");
}

fn gen_graph(dir: &Path, n: usize, seed: u64) -> std::path::PathBuf {
    let p = dir.join(format!("g{n}_{seed}.txt"));
    run_ok(
        apx()
            .args([
                "gen",
                "--family",
                "gnp",
                "--n",
                &n.to_string(),
                "--p",
                &(10.0 / n as f64).to_string(),
                "--seed",
                &seed.to_string(),
                "--out",
            ])
            .arg(&p),
    );
    p
}

#[test]
fn run_verify_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let graph = gen_graph(dir.path(), 300, 1);
    let m1 = dir.path().join("est1.apx");
    let m2 = dir.path().join("est2.apx");
    let report = dir.path().join("report.json");
    for (m, threads) in [(&m1, "1"), (&m2, "2")] {
        run_ok(
            apx()
                .args([
                    "run",
                    "--k",
                    "4",
                    "--seed",
                    "1",
                    "--threads",
                    threads,
                    "--graph",
                ])
                .arg(&graph)
                .arg("--out")
                .arg(m)
                .arg("--report")
                .arg(&report),
        );
    }
    // Identical config -> byte-identical dumps, any thread count.
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());

    // Sidecar carries the digest and config echo.
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(m1.with_extension("apx.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["n"], 300);
    assert_eq!(sidecar["k"], 4);

    // Report phase counters sum to the total.
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let sum: u64 = report["phases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["relax_attempts"].as_u64().unwrap())
        .sum();
    assert_eq!(sum, report["total_relax_attempts"].as_u64().unwrap());

    // Verify passes and reports zero violations.
    let out = run_ok(
        apx()
            .args(["verify", "--k", "4", "--graph"])
            .arg(&graph)
            .arg("--matrix")
            .arg(&m1),
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["soundness_violations"], 0);
    assert_eq!(v["two_approx_violations"], 0);
}

#[test]
fn verify_flags_corrupted_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let graph = gen_graph(dir.path(), 120, 2);
    let matrix = dir.path().join("est.apx");
    run_ok(
        apx()
            .args(["run", "--k", "2", "--seed", "2", "--graph"])
            .arg(&graph)
            .arg("--out")
            .arg(&matrix),
    );
    // Push one entry below its true distance.
    let mut bytes = std::fs::read(&matrix).unwrap();
    let n = 120usize;
    let (s, t) = (0usize, 90usize);
    let off = 12 + (s * n + t) * 4;
    let old = u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
    assert!(old > 0);
    bytes[off..off + 4].copy_from_slice(&0u32.to_le_bytes());
    let bad = dir.path().join("bad.apx");
    std::fs::write(&bad, &bytes).unwrap();

    let out = apx()
        .args(["verify", "--k", "2", "--graph"])
        .arg(&graph)
        .arg("--matrix")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["soundness_violations"].as_u64().unwrap() >= 1);
}

#[test]
fn exact_fallback_is_marked() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p10.txt");
    run_ok(
        apx()
            .args(["gen", "--family", "path", "--n", "10", "--out"])
            .arg(&graph),
    );
    let matrix = dir.path().join("est.apx");
    let report = dir.path().join("r.json");
    run_ok(
        apx()
            .args(["run", "--k", "2", "--graph"])
            .arg(&graph)
            .arg("--out")
            .arg(&matrix)
            .arg("--report")
            .arg(&report),
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["exact_fallback"], true);
}

#[test]
fn bad_k_is_a_usage_error_with_range() {
    let dir = tempfile::tempdir().unwrap();
    let graph = gen_graph(dir.path(), 64, 1);
    let out = apx()
        .args(["run", "--k", "63", "--graph"])
        .arg(&graph)
        .arg("--out")
        .arg(dir.path().join("x.apx"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("valid range"), "stderr: {err}");
}

#[test]
fn bench_emits_slopes_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("bench.jsonl");
    let out = run_ok(
        apx()
            .args([
                "bench", "--sizes", "128,256", "--ks", "2", "--seeds", "1", "--out",
            ])
            .arg(&log),
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["slopes"]["2"]["slope"].is_number());
    let lines = std::fs::read_to_string(&log).unwrap();
    assert_eq!(lines.lines().count(), 2);

    // Single size: counts only, no slope.
    let log1 = dir.path().join("bench1.jsonl");
    let out = run_ok(
        apx()
            .args([
                "bench", "--sizes", "128", "--ks", "2", "--seeds", "1", "--out",
            ])
            .arg(&log1),
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["slopes"]["2"]["slope"].is_null());
}
