use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

const EXPELLED: &str = "1 1999\n2 33\n3 2\n4 1\n5 1\n";
const NOT_EXPELLED: &str = "# value count\n1 1645\n2 183\n3 37\n4 13\n5 1\n6 1\n";

fn dpgof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpgof"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn test_report_on_expelled_dataset() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "e.txt", EXPELLED);
    let out = dir.path().join("r.json");
    let o = dpgof(&[
        "test",
        s(&data),
        "--format",
        "freq",
        "--seed",
        "11",
        "--boot-reps",
        "200",
        "-o",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("n = 2036"), "{stdout}");
    let r = json(&out);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["n"], 2036);
    assert!(r["tool_version"].is_string());
    let rep = &r["reports"][0];
    let nu = rep["fit"]["nu_hat"].as_f64().unwrap();
    assert!((nu - 5.89).abs() < 0.01);
    for field in [
        "critical_value",
        "p_value",
        "replicates",
        "degenerate_replicate_count",
        "alpha",
        "decision",
    ] {
        assert!(!rep[field].is_null(), "missing {field}");
    }
    assert_eq!(rep["statistic"]["id"]["kind"], "K_PROPOSED");
    assert_eq!(rep["decision"], "retain");
}

#[test]
fn not_expelled_dataset_is_rejected() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "n.txt", NOT_EXPELLED);
    let o = dpgof(&[
        "test",
        s(&data),
        "--format",
        "freq",
        "--boot-reps",
        "100",
        "-o",
        "-",
    ]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["reports"][0]["decision"], "reject");
}

#[test]
fn same_seed_gives_identical_json() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "n.txt", NOT_EXPELLED);
    let run = |name: &str, workers: &str| {
        let out = dir.path().join(name);
        let o = dpgof(&[
            "test",
            s(&data),
            "--format",
            "freq",
            "--seed",
            "5",
            "--boot-reps",
            "64",
            "--workers",
            workers,
            "-s",
            "K",
            "-s",
            "T:1",
            "-s",
            "CN",
            "-o",
            s(&out),
        ]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("a.json", "1");
    assert_eq!(a, run("b.json", "1"));
    assert_eq!(a, run("c.json", "3"));
    let other = dir.path().join("d.json");
    dpgof(&[
        "test",
        s(&data),
        "--format",
        "freq",
        "--seed",
        "6",
        "--boot-reps",
        "64",
        "-o",
        s(&other),
    ]);
    assert_ne!(a, std::fs::read(other).unwrap());
}

#[test]
fn raw_counts_input() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "raw.txt", "1\n1\n3\n# comment\n\n2\n");
    let o = dpgof(&["test", s(&data), "--boot-reps", "20", "-o", "-"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["n"], 4);
    assert_eq!(r["distinct"], 3);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "zero.txt", "1\n0\n");
    let o = dpgof(&["test", s(&zero)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let garbage = write(&dir, "g.txt", "1 2\nx y\n");
    assert_eq!(
        dpgof(&["loglog", s(&garbage), "--format", "freq"])
            .status
            .code(),
        Some(2)
    );

    let empty = write(&dir, "empty.txt", "# nothing\n");
    assert_eq!(dpgof(&["test", s(&empty)]).status.code(), Some(2));

    let single = write(&dir, "single.txt", "4\n4\n4\n");
    assert_eq!(dpgof(&["loglog", s(&single)]).status.code(), Some(3));

    let missing = dir.path().join("missing.txt");
    assert_eq!(dpgof(&["test", s(&missing)]).status.code(), Some(5));

    let ok = write(&dir, "ok.txt", "1\n2\n");
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        dpgof(&["loglog", s(&ok), "-o", s(&unwritable)])
            .status
            .code(),
        Some(5)
    );

    assert_eq!(
        dpgof(&["test", s(&ok), "--alpha", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(dpgof(&["test", s(&ok), "-s", "Q"]).status.code(), Some(2));
    assert_eq!(
        dpgof(&["sample", "--nu", "0.5", "--n", "3"]).status.code(),
        Some(3)
    );
}

#[test]
fn loglog_csv() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "e.txt", EXPELLED);
    let csv = dir.path().join("p.csv");
    let o = dpgof(&["loglog", s(&data), "--format", "freq", "-o", s(&csv)]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("slope     = -5.016"));
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "log_value,log_frequency");
    assert_eq!(lines.len(), 6);
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1999f64.ln()).abs() < 1e-12);
}

#[test]
fn sample_freq_pairs_round_trip() {
    let dir = TempDir::new().unwrap();
    let raw = dir.path().join("raw.txt");
    let freq = dir.path().join("freq.txt");
    for (path, fmt) in [(&raw, "raw"), (&freq, "freq")] {
        let o = dpgof(&[
            "sample",
            "--nu",
            "2",
            "--n",
            "500",
            "--seed",
            "9",
            "--format",
            fmt,
            "-o",
            s(path),
        ]);
        assert!(o.status.success());
    }
    let as_table = |path: &Path, fmt: &str| {
        let o = dpgof(&[
            "test",
            s(path),
            "--format",
            fmt,
            "--boot-reps",
            "10",
            "-o",
            "-",
        ]);
        assert!(o.status.success());
        let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        (
            r["n"].clone(),
            r["distinct"].clone(),
            r["reports"][0]["fit"]["nu_hat"].clone(),
        )
    };
    assert_eq!(as_table(&raw, "raw"), as_table(&freq, "freq"));
    assert_eq!(std::fs::read_to_string(&raw).unwrap().lines().count(), 500);
}

#[test]
fn power_study_from_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"schema_version": 1, "mc": 8, "n": 15, "boot": {"replicates": 20, "master_seed": 3},
            "tests": ["K", "T:0"],
            "alternatives": [{"kind": "NULL_DPARETO", "nu": 2.0}, {"kind": "SUM_DU", "nu": 2.0, "k": 2}]}"#,
    );
    let csv = dir.path().join("t.csv");
    let full = dir.path().join("t.json");
    let o = dpgof(&["power-study", s(&cfg), "-o", s(&csv), "--json", s(&full)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("alternative,K,T:0"));
    assert_eq!(text.lines().count(), 3);
    assert_eq!(json(&full)["mc"], 8);

    let again = dir.path().join("u.csv");
    dpgof(&["power-study", s(&cfg), "-o", s(&again), "--workers", "2"]);
    assert_eq!(text, std::fs::read_to_string(again).unwrap());

    let bad = write(&dir, "bad.json", r#"{"schema_version": 2}"#);
    assert_eq!(dpgof(&["power-study", s(&bad)]).status.code(), Some(2));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in [
        "full-n10.json",
        "full-n20.json",
        "desk-n20.json",
        "quick.json",
    ] {
        let p = root.join(name);
        let o = dpgof(&["power-study", s(&p), "--dump-config"]);
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}
