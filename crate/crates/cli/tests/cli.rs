use std::process::{Command, Output};

use serde_json::Value;

fn nusob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nusob"))
        .args(args)
        .env_remove("NUSOB_SEED")
        .env_remove("NUSOB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Data rows of a CSV report (comment lines dropped).
fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    csv::Reader::from_reader(body.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn indices_examples() {
    let o = nusob(&["indices", "embed", "-N", "3", "-k", "1", "-p", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("subcritical q∈[2,6]"), "{}", stdout(&o));

    let o = nusob(&["indices", "beta", "-s", "3/2", "-p", "3/2"]);
    assert!(stdout(&o).starts_with("5/4"), "{}", stdout(&o));

    let o = nusob(&["indices", "membership", "-N", "2", "-s", "1/2", "-p", "4,2", "-delta", "4/5"]);
    assert_eq!(stdout(&o).lines().next(), Some("Member"));
}

#[test]
fn decimals_are_read_exactly() {
    let a = nusob(&["indices", "membership", "-N", "2", "-s", "0.5", "-p", "4,2", "--delta", "0.8", "--format", "json"]);
    let b = nusob(&["indices", "membership", "-N", "2", "-s", "1/2", "-p", "4,2", "--delta", "4/5", "--format", "json"]);
    assert_eq!(json(&a)["result"], json(&b)["result"]);
    assert_eq!(json(&a)["result"]["margin"]["exact"], "3/5");
}

#[test]
fn json_carries_trace() {
    let o = nusob(&["indices", "embed", "-N", "2", "-p", "2,3", "--format", "json"]);
    let v = json(&o);
    let trace = v["result"]["verdict"]["trace"].as_array().unwrap();
    assert!(!trace.is_empty());
    assert!(trace.iter().all(|e| e.get("criterion").is_some() && e.get("holds").is_some()));
    assert_eq!(v["invocation"]["args"][0], "indices");
}

#[test]
fn precondition_violation_exits_2_with_inequality() {
    let o = nusob(&["indices", "conjugate", "-N", "3", "-p", "2", "-k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kp < N"), "{}", stderr(&o));
}

#[test]
fn bad_value_names_the_field() {
    let o = nusob(&["indices", "beta", "-s", "3/2", "-p", "x/y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--p"), "{}", stderr(&o));
    let o = nusob(&["heat", "--s", "1/2", "--p", "2,2", "--times", "geom:1:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--times"), "{}", stderr(&o));
}

#[test]
fn norm_gagliardo_member_cell_converges() {
    let o = nusob(&[
        "norm", "gagliardo", "--family", "rational-decay", "--delta", "0.3", "--s", "0.4", "--p", "2", "--N", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["result"]["classification"], "Converged");
}

#[test]
fn heat_csv_monotone_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "heat".to_string(),
            "--initial".into(),
            "gaussian".into(),
            "--N".into(),
            "1".into(),
            "--s".into(),
            "3/2".into(),
            "--p".into(),
            "4,2,2".into(),
            "--times".into(),
            "geom:1e-3:1:24".into(),
            "-o".into(),
            dir.path().join(out).to_string_lossy().into_owned(),
        ]
    };
    for out in ["a.csv", "b.csv"] {
        let a = args(out);
        let o = nusob(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# invocation")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));

    let header: Vec<String> = a
        .lines()
        .find(|l| l.starts_with("t,"))
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let mono: Vec<usize> = (0..header.len()).filter(|&i| header[i].starts_with("mono_")).collect();
    assert!(!mono.is_empty());
    let rows = csv_rows(&a);
    assert_eq!(rows.len(), 25);
    for r in &rows {
        for &i in &mono {
            assert_eq!(r[i].parse::<f64>().unwrap(), 1.0, "{} at t = {}", header[i], &r[0]);
        }
    }
}

#[test]
fn config_file_matches_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(
        &cfg,
        "[global]\nseed = 11\n\n[schrodinger]\ntimes = geom:1e-1:1e-3:3\nprobes = 0;0.5\nn = 512\n",
    )
    .unwrap();
    let from_cfg = nusob(&["schrodinger", "--config", cfg.to_str().unwrap()]);
    assert_eq!(from_cfg.status.code(), Some(0), "{}", stderr(&from_cfg));
    let from_flags = nusob(&["schrodinger", "--times", "geom:1e-1:1e-3:3", "--probes", "0;0.5", "-n", "512"]);
    assert_eq!(csv_rows(&stdout(&from_cfg)), csv_rows(&stdout(&from_flags)));
    assert!(stdout(&from_cfg).contains("\"seed\":11"));

    // An explicit flag overrides the file.
    let o = nusob(&["schrodinger", "--config", cfg.to_str().unwrap(), "--times", "0.1,0.01"]);
    assert_eq!(csv_rows(&stdout(&o)).len(), 3);

    // Unknown keys are rejected by name.
    std::fs::write(&cfg, "[schrodinger]\nbogus = 1\n").unwrap();
    let o = nusob(&["schrodinger", "--config", cfg.to_str().unwrap(), "--times", "0.1,0.01"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"), "{}", stderr(&o));
}

#[test]
fn env_overrides_config_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.ini");
    std::fs::write(&cfg, "seed = 3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nusob"))
        .args(["indices", "beta", "-s", "1/2", "-p", "2", "--format", "json", "--config", cfg.to_str().unwrap()])
        .env("NUSOB_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&o)["invocation"]["seed"], 42);
    let o = nusob(&["indices", "beta", "-s", "1/2", "-p", "2", "--format", "json", "--config", cfg.to_str().unwrap()]);
    assert_eq!(json(&o)["invocation"]["seed"], 3);
}

#[test]
fn timestamp_only_on_request() {
    let base = ["indices", "beta", "-s", "1/2", "-p", "2", "--format", "json"];
    assert!(json(&nusob(&base))["invocation"].get("generated_unix").is_none());
    let mut with = base.to_vec();
    with.push("--timestamp");
    assert!(json(&nusob(&with))["invocation"]["generated_unix"].is_u64());
}

#[test]
fn verify_exit_code_follows_summary() {
    let o = nusob(&["verify", "--suite", "empty"]);
    assert_eq!(o.status.code(), Some(0));
    let o = nusob(&["verify", "--suite", "acceptance", "--filter", "c03,c05", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 2);
    let fails = v["summary"]["fail"].as_u64().unwrap();
    assert_eq!(o.status.code(), Some(if fails == 0 { 0 } else { 1 }));
    assert_eq!(fails, 0, "{}", stdout(&o));
}
