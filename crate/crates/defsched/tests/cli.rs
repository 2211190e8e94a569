use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use defsched::formats::{self, InstanceFile};
use defsched_core::fixtures::t1;
use defsched_core::model::MONOLITHIC_OBJECTIVES;
use defsched_core::oracle::{enumerate_all, DEFAULT_CAP};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn defsched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defsched")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_version_succeed_and_usage_errors_exit_one() {
    assert_eq!(code(&defsched(&["--help"])), 0);
    assert_eq!(code(&defsched(&["--version"])), 0);
    assert_eq!(code(&defsched(&[])), 1);
    assert_eq!(code(&defsched(&["solve", "--bogus"])), 1);
    assert_eq!(code(&defsched(&["solve", "--instance", "x.json", "--out", "o", "--grid", "half"])), 1);
    assert_eq!(code(&defsched(&["solve", "--instance", "x.json", "--out", "o", "--nf", "0"])), 1);
}

#[test]
fn missing_or_malformed_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = defsched(&["solve", "--instance", "/nonexistent/i.json", "--out", path(dir.path())]);
    assert_eq!(code(&out), 3);

    let bad = dir.path().join("bad.json");
    let mut file = InstanceFile::from_instance(&t1());
    file.availability[0][0] = [9, 1];
    formats::write_json(&bad, &file).unwrap();
    let out = defsched(&["solve", "--instance", path(&bad), "--out", path(dir.path())]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("availability[0][0][0]"), "{err}");
}

#[test]
fn infeasible_instances_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // both chairs only free in the first window, which member 3 misses, so
    // both defences need member 2 at the same time
    let mut data = t1().to_data();
    data.availability[0] = vec![(0, 0), (0, 1)];
    data.availability[1] = vec![(0, 0), (0, 1)];
    let inst = defsched_core::Instance::new(*t1().dims(), data).unwrap();
    assert!(enumerate_all(&inst, DEFAULT_CAP).unwrap().is_empty());
    let file = dir.path().join("infeasible.json");
    formats::save_instance(&file, &inst).unwrap();
    let out = defsched(&["solve", "--instance", path(&file), "--out", path(&dir.path().join("o"))]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));

    // a defence whose committee never shares a window
    let mut data = t1().to_data();
    data.availability[0] = vec![(0, 0)];
    let inst = defsched_core::Instance::new(*t1().dims(), data).unwrap();
    formats::save_instance(&file, &inst).unwrap();
    let out = defsched(&["solve", "--instance", path(&file), "--out", path(&dir.path().join("o"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn monolithic_unit_solve_reproduces_the_oracle_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = defsched(&[
        "solve",
        "--instance",
        path(&fixture("t1.json")),
        "--method",
        "mono-eps",
        "--grid",
        "unit",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (_, got) = formats::load_front_csv(&dir.path().join("front.csv")).unwrap();
    let (_, want) = formats::load_front_csv(&fixture("t1_oracle_front.csv")).unwrap();
    assert!(got.objective_vectors().eq(want.objective_vectors()));
    for file in ["front.json", "iterations.csv", "report.csv", "meta.json"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }
}

#[test]
fn evaluate_reports_violations_of_a_tampered_solution() {
    let dir = tempfile::tempdir().unwrap();
    let inst = t1();
    let (solution, values) = enumerate_all(&inst, DEFAULT_CAP).unwrap().remove(0);
    let file = dir.path().join("solution.json");
    formats::save_solution(&file, &solution, &MONOLITHIC_OBJECTIVES, Some(&values)).unwrap();
    let out = defsched(&["evaluate", "--instance", path(&fixture("t1.json")), "--solution", path(&file)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("feasible"));
    assert!(!stdout(&out).contains("infeasible"));

    // both defences in the same room at the same time
    let text = fs::read_to_string(&file).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["defences"][1]["slot"] = json["defences"][0]["slot"].clone();
    fs::write(&file, json.to_string()).unwrap();
    let out = defsched(&["evaluate", "--instance", path(&fixture("t1.json")), "--solution", path(&file)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("infeasible"), "{text}");
    assert!(text.contains("room 1 holds overlapping defences 1 and 2"), "{text}");
}

#[test]
fn comparing_a_front_with_itself_counts_every_point() {
    let dir = tempfile::tempdir().unwrap();
    let front = dir.path().join("front.csv");
    fs::write(&front, "z1,z2,z3,z4,solution\n-4,2,-1,-4,0\n-6,3,-1,-4,1\n-5,2,0,-5,2\n").unwrap();
    let report = dir.path().join("report.csv");
    let out = defsched(&["compare", "--front", path(&front), "--baseline", path(&front), "--out", path(&report)]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(&report).unwrap();
    for row in reader.records() {
        let row = row.unwrap();
        assert_eq!(&row[2], "3");
        assert_eq!(&row[3], "3");
    }
}

#[test]
fn compare_counts_points_not_dominated_by_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&a, "z1,z2,solution\n2,3,0\n3,2,1\n").unwrap();
    fs::write(&b, "z1,z2,solution\n1,4,0\n2,2,1\n4,1,2\n").unwrap();
    let out = defsched(&["compare", "--front", path(&a), "--baseline", path(&b)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<String>> =
        text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect();
    // nothing in a is dominated by b; (2,2) in b is dominated by (2,3)
    assert_eq!(rows[0][3], "2");
    assert_eq!(rows[1][3], "2");
    // union box [1,4]x[1,4]: a maps to (1/3,2/3) and (2/3,1/3), covering 2/9 + 1/9;
    // only (1/3,1/3) of b lies off the axes
    assert!((rows[0][1].parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((rows[1][1].parse::<f64>().unwrap() - 1.0 / 9.0).abs() < 1e-12);
}

#[test]
fn export_tradeoffs_writes_one_file_per_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = defsched(&[
        "export-tradeoffs",
        "--front",
        path(&fixture("t1_oracle_front.csv")),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let mut files: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    files.sort();
    assert_eq!(
        files,
        ["tradeoff_z1_z2.csv", "tradeoff_z1_z3.csv", "tradeoff_z1_z4.csv", "tradeoff_z2_z3.csv", "tradeoff_z2_z4.csv", "tradeoff_z3_z4.csv"]
    );
}

#[test]
fn generate_writes_a_loadable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("small.json");
    let out = defsched(&["generate", "--preset", "small", "--seed", "4", "--rooms", "3", "--out", path(&file)]);
    assert_eq!(code(&out), 0);
    let inst = formats::load_instance(&file).unwrap();
    assert_eq!((inst.n_members(), inst.n_defences(), inst.n_rooms()), (25, 20, 3));
}

#[test]
fn seed_sweeps_write_one_directory_per_seed_and_a_mean_row() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.txt");
    fs::write(&seeds, "3 # first\n5\n").unwrap();
    let out = defsched(&[
        "solve",
        "--instance",
        path(&fixture("t1.json")),
        "--method",
        "decomp-nsga3",
        "--population",
        "4",
        "--generations",
        "3",
        "--divisions",
        "2",
        "--seed",
        "1",
        "--seeds-file",
        path(&seeds),
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for s in [1, 3, 5] {
        assert!(dir.path().join(format!("seed_{s}")).join("front.csv").exists());
    }
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let seeds: Vec<&str> = report.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(seeds, ["1", "3", "5", "mean"]);
}
