use std::path::Path;
use std::process::Command;

use clap::Parser;
use kronecker::cli::{dispatch, Cli};
use serde_json::Value;

fn run(args: &[&str]) -> (u8, Option<Value>) {
    let cli = Cli::try_parse_from(std::iter::once("kronecker").chain(args.iter().copied())).unwrap();
    let out = dispatch(&cli);
    (out.exit_code, out.report)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

fn binary(args: &[&str], cache: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kronecker"))
        .args(args)
        .env("KRONECKER_CACHE_DIR", cache)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn density_bound_report() {
    let (code, report) = run(&["density-bound", "--r", "19"]);
    assert_eq!(code, 0);
    let r = report.unwrap();
    assert_eq!(r["command"], "density-bound");
    assert_eq!(r["result"]["per_even"], "1024/51051");
    assert_eq!(r["result"]["per_even_decimal"], "0.020058372999");
    assert_eq!(r["params"]["r"], 19);
    assert_eq!(r["seed"], 0);
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn exit_codes_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path();
    let (code, out) = binary(&["--format", "plain", "density-bound", "--r", "19"], cache);
    assert_eq!(code, 0);
    assert!(out.contains("1024/51051"));

    assert_eq!(binary(&["represent", "--num", "0", "--den", "2", "--set", "evens"], cache).0, 2);
    assert_eq!(binary(&["no-such-command"], cache).0, 2);
    assert_eq!(binary(&["density-bound", "--r", "2"], cache).0, 2);

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "[]").unwrap();
    let args = ["verify-kd", "--r", "4", "--bmax", "10", "--limit", "1000", "--set", empty.to_str().unwrap()];
    let (code, out) = binary(&args, cache);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["failures"][0], 1);

    // the empty set has no difference in it, so any r-set refutes it
    let (code, _) = binary(&["delta-refute", "--r", "3", "--m", "10", "--set", "empty"], cache);
    assert_eq!(code, 3);

    let missing = dir.path().join("missing.json");
    assert_eq!(binary(&["complexity", "--system", missing.to_str().unwrap()], cache).0, 4);
}

#[test]
fn sieve_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let (code, report) = run(&["--cache-dir", cache, "sieve", "--limit", "100000"]);
    assert_eq!(code, 0);
    assert_eq!(report.unwrap()["result"]["prime_count"], 9592);
    let path = dir.path().join("sieve-100000.krn");
    assert!(path.exists());

    let (_, a) = run(&["--cache-dir", cache, "diff-count", "--limit", "100000", "--d", "2"]);
    let (_, b) = run(&["--cache-dir", cache, "--no-cache", "diff-count", "--limit", "100000", "--d", "2"]);
    assert_eq!(a.unwrap()["result"]["count"], 1224);
    assert_eq!(b.unwrap()["result"]["count"], 1224);

    // a damaged cache is rebuilt
    std::fs::write(&path, b"garbage").unwrap();
    let (code, r) = run(&["--cache-dir", cache, "diff-count", "--limit", "100000", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["result"]["count"], 1224);
}

#[test]
fn seeded_runs_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("ap3.json");
    std::fs::write(&sys, r#"{"d":2,"forms":[{"linear":[1,0],"const":0},{"linear":[1,1],"const":0},{"linear":[1,2],"const":0}]}"#).unwrap();
    let args = ["beta-inf", "--system", sys.to_str().unwrap(), "--n", "50", "--samples", "20000", "--seed", "5"];
    let (_, a) = run(&args);
    let (_, b) = run(&args);
    let (a, b) = (without_timing(a.unwrap()), without_timing(b.unwrap()));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["seed"], 5);

    let refute = ["delta-refute", "--r", "4", "--m", "60", "--budget", "500", "--seed", "3", "--set", "evens"];
    let (c1, a) = run(&refute);
    let (c2, b) = run(&refute);
    assert_eq!(c1, c2);
    assert_eq!(without_timing(a.unwrap()), without_timing(b.unwrap()));
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let cli = Cli::try_parse_from(["kronecker", "--cache-dir", cache, "--format", "csv", "kronecker", "--limit", "100", "--dmax", "6", "--threshold", "2"]).unwrap();
    let out = dispatch(&cli);
    assert_eq!(out.exit_code, 0);
    let mut lines = out.output.lines();
    assert_eq!(lines.next(), Some("d,count,member"));
    assert_eq!(lines.count(), 3);

    let cli = Cli::try_parse_from(["kronecker", "--format", "csv", "density-bound", "--r", "5"]).unwrap();
    assert_eq!(dispatch(&cli).exit_code, 2);
}

#[test]
fn hindman_and_dilate_commands() {
    let dir = tempfile::tempdir().unwrap();
    let coloring = dir.path().join("c.json");
    let parity: serde_json::Map<String, Value> =
        (1..16u64).map(|v| (v.to_string(), Value::from(v.count_ones() % 2))).collect();
    std::fs::write(&coloring, serde_json::to_string(&parity).unwrap()).unwrap();
    let c = coloring.to_str().unwrap();
    let (code, r) = run(&["hindman", "--gens", "1,2,4,8", "--coloring", c, "--depth", "2"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["result"]["verified"], true);
    assert_eq!(r["result"]["certificate"]["blocks"], serde_json::json!([[0, 1], [2, 3]]));
    assert_eq!(run(&["hindman", "--gens", "1,2,4,8", "--coloring", c, "--depth", "3"]).0, 1);

    let (code, r) = run(&["dilate", "--xs", "1,2,3,4,5,6,7,8,9", "--m", "3", "--count", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["result"]["block_sums"], serde_json::json!([3, 3, 9]));
}
