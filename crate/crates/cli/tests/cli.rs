use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn vietlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vietlab"))
        .args(args)
        .output()
        .unwrap()
}

fn vietlab_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vietlab"))
        .args(args)
        .env(key, val)
        .output()
        .unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn hexagon_csv(dir: &Path) -> PathBuf {
    let rows: Vec<String> = (0..6)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 6.0;
            format!("{},{}", t.cos(), t.sin())
        })
        .collect();
    write(dir, "hex.csv", &rows.join("\n"))
}

fn triangle_csv(dir: &Path) -> PathBuf {
    write(
        dir,
        "triangle.csv",
        &format!("0,0\n1,0\n0.5,{}\n", 3f64.sqrt() / 2.0),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn complex_counts() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon_csv(dir.path());
    let out = dir.path().join("complex.json");
    let v = json_out(&vietlab(&[
        "complex",
        "--input",
        s(&hex),
        "--type",
        "vr",
        "--r",
        "1.01",
        "--max-dim",
        "2",
        "--output",
        s(&out),
    ]));
    assert_eq!(v["counts"], serde_json::json!([6, 6, 0]));
    let dump: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(dump["simplices"].as_array().unwrap().len(), 12);

    let tri = triangle_csv(dir.path());
    let v = json_out(&vietlab(&[
        "complex",
        "--input",
        s(&tri),
        "--type",
        "cech-ambient",
        "--r",
        "0.6",
    ]));
    assert_eq!(v["counts"], serde_json::json!([3, 3, 1]));

    let cover = write(dir.path(), "cover.json", "[[0,1,2],[2,3],[3,4,5],[5,0]]");
    let v = json_out(&vietlab(&[
        "complex",
        "--input",
        s(&hex),
        "--type",
        "explicit",
        "--cover",
        s(&cover),
    ]));
    assert_eq!(v["counts"], serde_json::json!([6, 8, 2]));
}

#[test]
fn bad_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    assert_eq!(
        vietlab(&["complex", "--input", s(&empty), "--r", "1"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("nope.csv");
    assert_eq!(
        vietlab(&["persist", "--input", s(&missing)]).status.code(),
        Some(2)
    );
    let hex = hexagon_csv(dir.path());
    assert_eq!(
        vietlab(&["complex", "--input", s(&hex)]).status.code(),
        Some(2)
    );
    let asym = write(dir.path(), "d.csv", "0,1\n2,0\n");
    assert_eq!(
        vietlab(&["persist", "--input", s(&asym), "--distances"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn persist_examples() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon_csv(dir.path());
    let v = json_out(&vietlab(&["persist", "--input", s(&hex)]));
    let h1 = v["dims"]["1"].as_array().unwrap();
    assert_eq!(h1.len(), 1);
    assert!((h1[0][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((h1[0][1].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-9);

    let v = json_out(&vietlab(&["persist", "--input", s(&hex), "--r-max", "0.5"]));
    let h0 = v["dims"]["0"].as_array().unwrap();
    assert_eq!(h0.len(), 6);
    assert!(h0.iter().all(|b| b[1] == "inf"));

    let one = write(dir.path(), "one.csv", "0.5,0.5\n");
    let v = json_out(&vietlab(&["persist", "--input", s(&one)]));
    assert_eq!(v["dims"]["0"], serde_json::json!([[0.0, "inf"]]));
}

#[test]
fn compare_examples() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", r#"{"dims":{"0":[[0,2]]},"r_max":3}"#);
    let b = write(dir.path(), "b.json", r#"{"dims":{"0":[]},"r_max":2}"#);
    let v = json_out(&vietlab(&["compare", s(&a), s(&a), "--dim", "0"]));
    assert_eq!(v["bottleneck"], 0.0);
    let o = vietlab(&["compare", s(&a), s(&b), "--dim", "0"]);
    let v = json_out(&o);
    assert_eq!(v["bottleneck"], 1.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn thicken_dump_and_cap() {
    let dir = TempDir::new().unwrap();
    let hex = hexagon_csv(dir.path());
    let out = dir.path().join("sample");
    let v = json_out(&vietlab(&[
        "thicken",
        "--input",
        s(&hex),
        "--r",
        "1.01",
        "--grid-m",
        "2",
        "--max-support",
        "2",
        "--output",
        s(&out),
    ]));
    assert_eq!(v["measures"], 12);
    assert_eq!(
        fs::read_to_string(out.join("measures.csv"))
            .unwrap()
            .lines()
            .count(),
        12
    );
    assert_eq!(
        fs::read_to_string(out.join("distances.csv"))
            .unwrap()
            .lines()
            .count(),
        12
    );
    let o = vietlab_env(
        &["thicken", "--input", s(&hex), "--r", "1.01"],
        "VIETLAB_SIZE_CAP",
        "5",
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sample too large"));
}

#[test]
fn latschev_experiment() {
    let dir = TempDir::new().unwrap();
    let v = json_out(&vietlab(&[
        "experiment",
        "latschev",
        "--shape",
        "circle",
        "--n",
        "100",
        "--noise",
        "0.05",
        "--seed",
        "7",
        "--output",
        s(dir.path()),
    ]));
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["report"]["long_bars"], 1);
    assert!(dir.path().join("report.json").exists());
    let v = json_out(&vietlab(&[
        "experiment",
        "latschev",
        "--shape",
        "hexagon",
        "--seed",
        "0",
    ]));
    assert_eq!(v["verdict"], "PASS");
    let v = json_out(&vietlab(&[
        "experiment",
        "latschev",
        "--n",
        "3",
        "--seed",
        "7",
    ]));
    assert_eq!(v["verdict"], "FAIL");
    assert_eq!(v["report"]["insufficient_sampling"], true);
}

#[test]
fn thickening_probe_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = |out: &Path| {
        vietlab(&[
            "experiment",
            "thickening-probe",
            "--shape",
            "hexagon",
            "--r",
            "1.2",
            "--seed",
            "1",
            "--output",
            s(out),
        ])
    };
    let v = json_out(&args(&a));
    json_out(&args(&b));
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["report"]["levels"].as_array().unwrap().len(), 3);
    assert_eq!(
        fs::read(a.join("report.json")).unwrap(),
        fs::read(b.join("report.json")).unwrap()
    );
    let o = vietlab_env(
        &[
            "experiment",
            "thickening-probe",
            "--shape",
            "hexagon",
            "--seed",
            "1",
        ],
        "VIETLAB_SIZE_CAP",
        "10",
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn neighborhood_audits() {
    let v = json_out(&vietlab(&[
        "experiment",
        "neighborhood",
        "--seed",
        "0",
        "--instances",
        "3",
        "--trials",
        "100",
    ]));
    let reports = v["reports"].as_array().unwrap();
    assert!(reports.iter().all(|r| r["pass"] == true));
    let v = json_out(&vietlab(&[
        "experiment",
        "neighborhood",
        "--seed",
        "0",
        "--eps",
        "0",
        "--instances",
        "2",
        "--trials",
        "20",
    ]));
    let first = &v["reports"][0];
    assert_eq!(first["hits"], 0);
    assert!(first["note"]
        .as_str()
        .unwrap()
        .contains("empty neighborhood"));
    assert_eq!(
        vietlab(&["experiment", "neighborhood"]).status.code(),
        Some(2)
    );
}
