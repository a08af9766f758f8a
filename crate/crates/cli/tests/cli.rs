use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn eaed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eaed")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Data rows of a CSV artifact, skipping the `#` header lines.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

fn header_value(path: &Path, key: &str) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    let prefix = format!("# {key}: ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap().to_string()
}

fn schema_check(summary: &Path) -> serde_json::Value {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schemas/summary.schema.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    doc
}

fn tmp() -> (tempfile::TempDir, PathBuf) {
    let d = tempfile::tempdir().unwrap();
    let path = d.path().to_path_buf();
    (d, path)
}

#[test]
fn capacity_at_zero_threshold_has_no_erasures() {
    let (_d, dir) = tmp();
    let out = dir.join("cap.csv");
    let o = eaed(&["capacity", "--esn0-db", "0", "--t", "0", "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][3].parse::<f64>().unwrap(), 0.0);
    let delta: f64 = r[0][2].parse().unwrap();
    assert!((delta - 0.0786496035251426).abs() < 1e-12);
    assert_eq!(header_value(&out, "config_hash").len(), 64);
    assert!(header_value(&out, "config").starts_with('{'));
}

#[test]
fn capacity_to_stdout_without_out() {
    let o = eaed(&["capacity", "--esn0-db=-1", "--t", "0.1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "esn0_db,T,delta_c,eps_c,capacity"));
    assert!(text.lines().last().unwrap().starts_with("-1,0.1,"));
}

#[test]
fn transition_table_is_deterministic() {
    let (_d, dir) = tmp();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for out in [&a, &b] {
        let o = eaed(&["transition-table", "--code", "nu4 t2", "--out", p(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r = rows(&a);
    assert!(r.len() > 100);
    assert!(r.iter().all(|x| x.len() == 5));
}

#[test]
fn weights_of_the_15_7_code_are_exact() {
    let (_d, dir) = tmp();
    let out = dir.join("w.csv");
    assert!(eaed(&["weights", "--code", "nu4t2", "--out", p(&out)]).status.success());
    let a: Vec<u64> = rows(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(a.iter().sum::<u64>(), 128);
    assert_eq!(a[5], 18);
}

#[test]
fn invalid_configuration_exits_with_2() {
    let (_d, dir) = tmp();
    assert_eq!(eaed(&["threshold", "--decoder", "bogus"]).status.code(), Some(2));
    assert_eq!(eaed(&["threshold", "--code", "nu4t9"]).status.code(), Some(2));
    assert_eq!(eaed(&["reproduce-fig5"]).status.code(), Some(2));
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "cod = \"nu6t3\"\n").unwrap();
    assert_eq!(eaed(&["capacity", "--config", p(&cfg)]).status.code(), Some(2));
    assert_eq!(eaed(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let (_d, dir) = tmp();
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, "[channel]\nesn0_db = 3.0\nt = 0.2\n").unwrap();
    let out = dir.join("c.csv");
    assert!(eaed(&["capacity", "--config", p(&cfg), "--esn0-db", "1", "--out", p(&out)])
        .status
        .success());
    let r = rows(&out);
    assert_eq!(r[0][0], "1");
    assert_eq!(r[0][1], "0.2");
}

#[test]
fn printed_config_round_trips() {
    let (_d, dir) = tmp();
    let o = eaed(&["threshold", "--code", "nu6t3", "--iters", "7", "--print-config"]);
    assert!(o.status.success());
    let cfg = dir.join("r.toml");
    std::fs::write(&cfg, &o.stdout).unwrap();
    let again = eaed(&["threshold", "--config", p(&cfg), "--print-config"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn threshold_summary_matches_schema() {
    let (_d, dir) = tmp();
    let out = dir.join("th.csv");
    let o = eaed(&["threshold", "--code", "nu5t2", "--t", "0.05", "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = schema_check(&out.with_extension("json"));
    let esn0: f64 = rows(&out)[0][1].parse().unwrap();
    assert_eq!(doc["result"]["esn0_db"].as_f64().unwrap(), esn0);
}

#[test]
fn scan_resumes_from_checkpoint() {
    let (_d, dir) = tmp();
    let out = dir.join("scan.csv");
    let args = ["scan-t", "--code", "nu5t2", "--t-max", "0.1", "--steps", "6", "--out", p(&out)];
    let o = eaed(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    schema_check(&out.with_extension("json"));
    let first = rows(&out);
    assert!(!out.with_extension("ckpt.json").exists());

    // A checkpointed value is reused instead of recomputed.
    let hash = header_value(&out, "config_hash");
    let ckpt = serde_json::json!({
        "config_hash": hash,
        "points": [{ "t": 0.04, "esn0_db": 42.0, "non_monotone": false }],
    });
    std::fs::write(out.with_extension("ckpt.json"), ckpt.to_string()).unwrap();
    assert!(eaed(&args).status.success());
    let second = rows(&out);
    let at = |r: &[Vec<String>], t: &str| r.iter().find(|x| x[0] == t).unwrap()[1].clone();
    assert_eq!(at(&second, "0.04"), "42");
    assert_eq!(at(&second, "0"), at(&first, "0"));
}

#[test]
fn simulation_budget_exceeded_exits_with_3() {
    let (_d, dir) = tmp();
    let out = dir.join("sim.csv");
    let o = eaed(&[
        "simulate", "--code", "nu4t2", "--esn0-db", "6", "--target-ber", "0.01", "--max-bits", "225", "--seed", "1",
        "--out", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&out);
    assert_eq!(r[0][3], "1");
    schema_check(&out.with_extension("json"));
}

#[test]
fn simulated_threshold_with_explicit_bracket() {
    let (_d, dir) = tmp();
    let out = dir.join("st.csv");
    let o = eaed(&[
        "sim-threshold", "--code", "nu4t2", "--target-ber", "0.01", "--lo-db=-4", "--hi-db", "2", "--width-db",
        "0.5", "--seed", "3", "--max-bits", "50000000", "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&out);
    let lo: f64 = r[0][2].parse().unwrap();
    let hi: f64 = r[0][3].parse().unwrap();
    assert!(hi - lo <= 0.5 && lo >= -4.0 && hi <= 2.0, "{lo} {hi}");
    schema_check(&out.with_extension("json"));
}

#[test]
fn simulation_is_reproducible_for_a_seed() {
    let (_d, dir) = tmp();
    let run = |name: &str, threads: &str| {
        let out = dir.join(name);
        let o = eaed(&[
            "simulate", "--code", "nu5t2", "--esn0-db", "3", "--max-frames", "64", "--seed", "9", "--threads", threads,
            "--out", p(&out),
        ]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(3));
        rows(&out)
    };
    assert_eq!(run("a.csv", "1"), run("b.csv", "2"));
}
