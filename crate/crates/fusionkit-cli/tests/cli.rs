use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fusionkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionkit")).args(args).env_remove("FUSIONKIT_DATA").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fusionkit-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        let target = to.join(e.file_name());
        if e.file_type().unwrap().is_dir() {
            copy_dir(&e.path(), &target);
        } else {
            fs::copy(e.path(), target).unwrap();
        }
    }
}

#[test]
fn table1_csv_row() {
    let o = fusionkit(&["table", "table1", "--format", "csv", "--graph", "E_8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("E_8,28,"));
    assert!(row.contains(",1240,0 [fixture],63136,"));
}

#[test]
fn table5_json_has_e21_order() {
    let o = fusionkit(&["table", "table5", "--graph", "E_21", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["d_H"], "288576");
    assert!(row["|E|"].as_str().unwrap().starts_with("24("));
    assert_eq!(row["|J|"], "2");
}

#[test]
fn table_algebra_must_match() {
    let o = fusionkit(&["table", "table4", "--algebra", "sl2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_passes_and_fails_with_exit_codes() {
    let ok = fusionkit(&["check", "discriminant", "--algebra", "sl2", "--level", "10"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("sl2 A_11: D = 2^11·12^9 (closed form) ✓ (D = 10567230160896)"));

    let bad = fusionkit(&["check", "formulas", "--algebra", "sl3", "--graph", "D_9^t"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("first counterexample"));

    let empty = fusionkit(&["check", "trig", "--algebra", "sl2", "--graph", "E_9", "--strict"]);
    assert_eq!(empty.status.code(), Some(1));
}

#[test]
fn check_tolerance_is_honoured() {
    let o = fusionkit(&["check", "discriminant", "--algebra", "sl2", "--level", "10", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn split_writes_toric_family() {
    let dir = scratch("split");
    let out = dir.join("d6.json");
    let o = fusionkit(&["split", "D_6", "--algebra", "sl2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("blocks {1×8, 2×1}"));
    assert!(text.contains("12 toric matrices, verify ✓"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 12);
    assert_eq!(v[0]["x"], 0);
}

#[test]
fn split_budget_exhaustion_exits_2() {
    let o = fusionkit(&["split", "E_8", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exhausted"));
}

#[test]
fn graph_show_with_qdims_and_induction() {
    let o = fusionkit(&["graph", "show", "E_6", "--qdims", "--induction"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("1 + √3 ≈ 2.732051"));
    assert!(text.contains("| 6 | 1 | 0 | 1 | 0 | 0 | 0 |"));
    let sl3 = fusionkit(&["graph", "show", "E_5", "--qdims"]);
    assert!(stdout(&sl3).starts_with("sl3 E_5"));
}

#[test]
fn data_directory_override() {
    let dir = scratch("data");
    copy_dir(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../fusionkit/data"), &dir);
    fs::remove_file(dir.join("graphs/sl3_E_9.json")).unwrap();
    let run = |strict: bool| {
        let mut args = vec!["table", "table5", "--format", "csv"];
        if strict {
            args.extend(["--strict", "--graph", "E_9"]);
        }
        Command::new(env!("CARGO_BIN_EXE_fusionkit")).args(&args).env("FUSIONKIT_DATA", &dir).output().unwrap()
    };
    let lax = run(false);
    assert!(lax.status.success());
    let e9 = stdout(&lax).lines().find(|l| l.starts_with("E_9,")).unwrap().to_string();
    assert!(e9.contains("[unavailable]"));
    assert_eq!(run(true).status.code(), Some(1));
}
