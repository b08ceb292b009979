use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use trispec::lower::{self, Method};
use trispec::Triangle;

fn trispec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trispec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = trispec(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    trispec(args).status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bounds_csv_for_right_isosceles() {
    let out = ok(&["bounds", "--sides", "1,1,1.4142135623730951", "--format", "csv"]);
    for line in ["lower,Polya,45.5858,false", "lower,Freitas,39.4784,false", "best_lower,Polya,45.5858,false"] {
        assert!(out.lines().any(|l| l == line), "missing {line} in\n{out}");
    }
}

#[test]
fn bounds_json_keeps_full_precision() {
    let v: Value = serde_json::from_str(&ok(&["bounds", "--vertices", "0,0;1,0;0.5,0.8660254037844386", "--format", "json"])).unwrap();
    let polya = v["best"]["value"].as_f64().unwrap();
    assert!((polya / (16.0 * PI * PI / 3.0) - 1.0).abs() < 1e-12);
    assert_eq!(v["best"]["method"], "Polya");
    let ratio = v["ratio"]["value"].as_f64().unwrap();
    assert!((ratio - 7.0 / 3.0).abs() < 1e-9);
}

#[test]
fn bounds_with_oracle_brackets_equilateral() {
    let out = ok(&["bounds", "--sides", "1,1,1", "--oracle", "--resolution", "64", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let l1 = v["oracle"]["extrapolated"][0].as_f64().unwrap();
    let tol = v["oracle"]["error"][0].as_f64().unwrap();
    assert!((l1 - 16.0 * PI * PI / 3.0).abs() <= 3.0 * tol, "{l1} +- {tol}");
}

#[test]
fn regions_winner_matches_best_lower() {
    let out = ok(&["regions", "--grid", "6x4", "--m-max", "5", "--bounds", "polya,rect,protter,freitas,sector"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("M,U,winner"));
    let methods = [Method::Polya, Method::Freitas, Method::Protter, Method::RectThm, Method::SectorThm];
    let mut n = 0;
    for (k, line) in lines.enumerate() {
        let (i, j) = (k % 6, k / 6);
        let m = 1.0 + (i as f64 + 0.5) * 4.0 / 6.0;
        let u = (j as f64 + 0.5) / 4.0;
        let best = lower::best_lower(&Triangle::from_um(u, m).unwrap().metrics(), &methods).unwrap();
        assert_eq!(line.split(',').nth(2), Some(best.method.name()), "{line}");
        n += 1;
    }
    assert_eq!(n, 24);
}

#[test]
fn regions_single_cell_and_determinism() {
    let one = ok(&["regions", "--grid", "1x1", "--m-max", "3"]);
    assert_eq!(one.lines().count(), 2);
    assert!(one.lines().nth(1).unwrap().starts_with("2,0.5,"));
    for format in ["csv", "svg"] {
        let args = ["regions", "--grid", "20x10", "--format", format];
        let a = trispec(&args).stdout;
        let b = Command::new(env!("CARGO_BIN_EXE_trispec"))
            .args(args)
            .env("TRISPEC_THREADS", "3")
            .output()
            .unwrap()
            .stdout;
        assert_eq!(a, b, "{format} output differs");
    }
    let svg = ok(&["regions", "--grid", "4x4", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(code(&["regions", "--grid", "4by4"]), 2);
    assert_eq!(code(&["regions", "--bounds", "polya,nonsense"]), 2);
}

#[test]
fn tables_rows_and_selection() {
    let out = ok(&["tables", "--which", "2"]);
    assert!(out.lines().any(|l| l == "2,exact,value,30.7054,exact"), "{out}");
    assert!(out.lines().any(|l| l == "2,SectorThm,value,29.8449,lower_bounds"));
    assert!(out.lines().skip(1).all(|l| l.starts_with("2,")));
    let t4 = ok(&["tables", "--which", "4"]);
    assert!(t4.lines().any(|l| l == "4,cited conjecture upper,value,299.7,cited"), "{t4}");
    assert_eq!(ok(&["tables", "--which", ""]), "table,row,column,value,source\n");
    assert_eq!(code(&["tables", "--which", "5"]), 2);
}

#[test]
fn verify_reports_depths() {
    let gap = ok(&["verify", "--theorem", "gap", "--case", "1"]);
    assert!(gap.contains("gap case 1") && gap.contains("Proved, depth 0"), "{gap}");
    let ratio = ok(&["verify", "--theorem", "ratio", "--case", "3"]);
    assert!(ratio.contains("Proved, depth 1"), "{ratio}");
    assert!(ratio.contains("2.3285 < 7/3 holds"), "{ratio}");
    assert_eq!(code(&["verify", "--theorem", "ratio", "--case", "2"]), 2);
    assert_eq!(code(&["verify", "--theorem", "spectral"]), 2);
    assert_eq!(code(&["verify", "--theorem", "ratio", "--case", "3", "--max-depth", "0"]), 4);
}

#[test]
fn verify_writes_goal_and_trace_files() {
    let dir = scratch("verify-out");
    let _ = std::fs::remove_dir_all(&dir);
    ok(&["verify", "--theorem", "gap", "--case", "2", "--out", dir.to_str().unwrap()]);
    let names: Vec<String> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    let goals: Vec<&String> = names.iter().filter(|n| n.ends_with(".goal.json")).collect();
    assert_eq!(goals.len(), 3, "{names:?}");
    for g in goals {
        let trace = g.replace(".goal.json", ".trace.json");
        assert!(names.contains(&trace), "{trace}");
        let path = dir.join(g);
        ok(&["prove", "--file", path.to_str().unwrap()]);
    }
}

fn goal_file(name: &str, coeffs: &[(u32, u32, &str)], max_depth: u32) -> PathBuf {
    let coeffs: Vec<Value> = coeffs
        .iter()
        .map(|&(i, j, q)| serde_json::json!({"i": i, "j": j, "pi_pow": 0, "q": q}))
        .collect();
    let goal = serde_json::json!({"coeffs": coeffs, "rect": ["0", "1", "0", "1"], "max_depth": max_depth});
    let path = scratch(name);
    std::fs::write(&path, goal.to_string()).unwrap();
    path
}

#[test]
fn prove_exit_codes() {
    let worked = goal_file(
        "worked.json",
        &[(2, 2, "1"), (2, 1, "-1"), (1, 2, "2"), (2, 0, "1"), (1, 1, "1"), (0, 2, "1"), (1, 0, "-3"), (0, 1, "-2")],
        12,
    );
    let trace = scratch("worked.trace.json");
    let out = ok(&["prove", "--file", worked.to_str().unwrap(), "--out", trace.to_str().unwrap()]);
    assert!(out.starts_with("Proved") && out.contains("depth 0"), "{out}");
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(t["root"]["steps"].as_array().is_some_and(|s| !s.is_empty()), "{t}");

    let positive = goal_file("positive.json", &[(1, 1, "1"), (0, 0, "-1/2")], 12);
    assert_eq!(code(&["prove", "--file", positive.to_str().unwrap()]), 3);
    // −(x − 1/2)² − (y − 1/2)² − 1/1000 needs subdivision
    let tight = goal_file("tight.json", &[(2, 0, "-1"), (1, 0, "1"), (0, 2, "-1"), (0, 1, "1"), (0, 0, "-501/1000")], 12);
    let path = tight.to_str().unwrap();
    assert_eq!(code(&["prove", "--file", path, "--max-depth", "0"]), 4);
    assert_eq!(code(&["prove", "--file", path]), 0);
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"coeffs\": 3}").unwrap();
    assert_eq!(code(&["prove", "--file", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["prove", "--file", "/nonexistent/goal.json"]), 2);
}

#[test]
fn oracle_pgm_round_trip() {
    let prefix = scratch("tri");
    let direct: Value = serde_json::from_str(&ok(&[
        "oracle",
        "--sides",
        "1,1.2,1.4",
        "--resolution",
        "48",
        "--k",
        "1",
        "--format",
        "json",
        "--export",
        prefix.to_str().unwrap(),
    ]))
    .unwrap();
    let pgm = prefix.with_extension("pgm");
    let header = prefix.with_extension("json");
    let again: Value = serde_json::from_str(&ok(&[
        "oracle",
        "--pgm",
        pgm.to_str().unwrap(),
        "--header",
        header.to_str().unwrap(),
        "--k",
        "1",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(direct["cells"], again["cells"]);
    assert_eq!(direct["result"]["extrapolated"], again["result"]["extrapolated"]);
    assert_eq!(code(&["oracle"]), 2);
    assert_eq!(code(&["oracle", "--sides", "1,1,3"]), 2);
}

#[test]
fn symlab_preserves_cells() {
    let out = ok(&["symlab", "--sides", "1,1.3,1.6", "--transform", "continuous", "--resolution", "40"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[2] == rows[0][2]));
    assert_eq!(rows[1][3], rows[0][3], "alpha 0 is the identity");
    let pol = ok(&["symlab", "--sides", "1,1.3,1.6", "--transform", "polarize", "--line", "0.4,0.2;1,0.5", "--flip", "--resolution", "40"]);
    assert_eq!(pol.lines().count(), 3);
    assert_eq!(code(&["symlab", "--sides", "1,1,1", "--line", "0,0;0,0"]), 2);
    assert_eq!(code(&["symlab", "--sides", "1,1,1", "--alpha", "2"]), 2);
}

#[test]
fn malformed_triangles_exit_two() {
    assert_eq!(code(&["bounds", "--sides", "1,2"]), 2);
    assert_eq!(code(&["bounds", "--sides", "1,1,5"]), 2);
    assert_eq!(code(&["bounds", "--vertices", "0,0,1,0,0,1"]), 2);
    assert_eq!(code(&["bounds"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}
