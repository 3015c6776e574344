//! End-to-end tests of the `msum` binary. Text renderings of the published
//! tables are pinned by files in `tests/golden/`; set `MSUM_UPDATE_GOLDEN=1`
//! to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn msum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msum"))
        .args(args)
        .env_remove("MSUM_STORE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let out = msum(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("MSUM_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(stdout(&out), want, "{args:?} differs from {name}");
}

#[test]
fn golden_single_values() {
    golden("m_4_7.txt", &["m", "4", "7"]);
    golden("m_1_9.txt", &["m", "1", "9"]);
    golden("m_9_26.txt", &["m", "9", "26"]);
}

#[test]
fn golden_towers() {
    golden("sequence_23_11.txt", &["sequence", "23", "11", "5"]);
    golden("sequence_229_19.txt", &["sequence", "229", "19", "4"]);
    golden("sequences_published.txt", &["sequence", "--published"]);
}

#[test]
fn golden_exception_sets() {
    golden("exceptions_5.txt", &["exceptions", "5"]);
    golden("exceptions_7.txt", &["exceptions", "7"]);
}

#[test]
fn golden_tables() {
    golden(
        "order5_p1000.txt",
        &["table", "--order", "5", "--p-max", "1000"],
    );
    golden(
        "order7_p2689.txt",
        &["table", "--order", "7", "--p-max", "2689"],
    );
    golden("exceptional_pairs.txt", &["table", "--exceptional"]);
    golden(
        "grid_e12.csv",
        &["table", "--e-max", "12", "--format", "csv"],
    );
}

#[test]
fn single_value_contents() {
    let s = stdout(&msum(&["m", "4", "7"]));
    assert!(s.starts_with("m(4, 7) = 3\n"));
    assert!(s.contains("4^0 + 4^1 + 4^2"));
    assert!(stdout(&msum(&["m", "1", "9"])).contains("m(1, 9) = 9"));
    assert!(stdout(&msum(&["m", "9", "26"])).contains("m(9, 26) = 6"));

    let v: serde_json::Value =
        serde_json::from_slice(&msum(&["m", "4", "7", "--format", "json"]).stdout).unwrap();
    assert_eq!(v["m"], 3);
    assert_eq!(v["n"], 3);
    assert_eq!(v["ceil_bound"], 3);
}

#[test]
fn usage_errors_exit_2() {
    let out = msum(&["m", "6", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coprime"));
    assert_eq!(msum(&["m", "4"]).status.code(), Some(2));
    assert_eq!(
        msum(&["m", "4", "7", "--format", "xml"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    assert_eq!(
        msum(&["verify", "nonsense", "--report", report.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unreached_tower_exits_3() {
    let out = msum(&["sequence", "23", "11", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("sequence: (3, 5, 9)"));
}

#[test]
fn grid_ordering_and_formats() {
    let csv = stdout(&msum(&["table", "--e-max", "12", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("e,q,n,e1,m"));
    let rows: Vec<Vec<u64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows
        .windows(2)
        .all(|w| (w[0][0], w[0][1]) < (w[1][0], w[1][1])));
    assert!(rows.contains(&vec![7, 2, 3, 1, 3]));

    let json: serde_json::Value =
        serde_json::from_slice(&msum(&["table", "--e-max", "12", "--format", "json"]).stdout)
            .unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), rows.len());
    for (obj, row) in arr.iter().zip(&rows) {
        for (key, val) in ["e", "q", "n", "e1", "m"].iter().zip(row) {
            assert_eq!(obj[key].as_u64(), Some(*val));
        }
    }
}

fn verify(dir: &Path, args: &[&str]) -> (Output, serde_json::Value, PathBuf) {
    let report = dir.join("report.json");
    let mut full = vec!["verify"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--report", report.to_str().unwrap()]);
    let out = msum(&full);
    let v = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    (out, v, report)
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let (out, v, _) = verify(dir.path(), &["corollary8", "--e-max", "1224"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["claim_id"], "corollary8");
    assert!(v["params"].is_object());
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert!(v["checks"].as_u64().unwrap() > 400_000);

    let (out, _, _) = verify(dir.path(), &["conjecture4", "--e-max", "600"]);
    assert_eq!(out.status.code(), Some(0));
    let (out, _, _) = verify(dir.path(), &["prop15", "--p-max", "2689"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_default_report_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_msum"))
        .args(["verify", "two_power", "--k-cap", "6"])
        .current_dir(dir.path())
        .env_remove("MSUM_STORE")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("reports/two_power.json").exists());
}

#[test]
fn store_flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let from_env = dir.path().join("env.store");
    let from_flag = dir.path().join("flag.store");
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_msum"))
            .args(["table", "--e-max", "30"])
            .args(extra)
            .env("MSUM_STORE", &from_env)
            .output()
            .unwrap()
    };
    let a = run(&[]);
    assert!(a.status.success());
    assert!(from_env.exists());
    let b = run(&["--store", from_flag.to_str().unwrap()]);
    assert!(from_flag.exists());
    assert_eq!(a.stdout, b.stdout);
    let env_bytes = std::fs::read(&from_env).unwrap();
    let c = run(&[]);
    assert_eq!(c.stdout, a.stdout);
    assert_eq!(std::fs::read(&from_env).unwrap(), env_bytes);
}
