use std::path::Path;
use std::process::{Command, Output};

use lrdlsr::data::load_dataset;
use lrdlsr::eval::SavedModel;
use lrdlsr::models::ConvergenceTrace;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrdlsr"))
        .args(args)
        .output()
        .expect("spawn lrdlsr")
}

fn gen_synth(dir: &Path) -> String {
    let out = dir.join("synth.csv");
    let path = out.to_str().unwrap().to_string();
    let status = run(&[
        "gen-synth", "--classes", "3", "--per-class", "6", "--dim", "5", "--seed", "2", "--out", &path,
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    path
}

#[test]
fn gen_synth_writes_a_loadable_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let path = gen_synth(tmp.path());
    let ds = load_dataset(Path::new(&path)).unwrap();
    assert_eq!((ds.dim(), ds.len(), ds.num_classes()), (5, 18, 3));
}

#[test]
fn fit_writes_model_and_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen_synth(tmp.path());
    let model = tmp.path().join("model.json");
    let trace = tmp.path().join("trace.csv");
    let out = run(&[
        "fit", "--data", &data, "--out", model.to_str().unwrap(), "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let saved = SavedModel::load(&model).unwrap();
    assert_eq!(saved.method, "lrdlsr");
    assert_eq!(saved.q.len(), 3);
    assert_eq!(saved.train_labels.len(), 18);
    let text = std::fs::read_to_string(trace).unwrap();
    assert_eq!(text.lines().next(), Some(ConvergenceTrace::HEADER));
    assert_eq!(text.lines().count(), saved.iterations + 1);
}

#[test]
fn eval_writes_report_and_one_trace_per_trial() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen_synth(tmp.path());
    let report = tmp.path().join("run.txt");
    let out = run(&[
        "eval", "--data", &data, "--train-per-class", "2,3", "--repeats", "2", "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("[train_per_class 2]") && text.contains("[train_per_class 3]"));
    for k in [2, 3] {
        for r in 0..2 {
            assert!(tmp.path().join(format!("run.k{k}.trial{r}.csv")).exists());
        }
    }
}

#[test]
fn grid_writes_one_row_per_cell() {
    let tmp = tempfile::tempdir().unwrap();
    let data = gen_synth(tmp.path());
    let table = tmp.path().join("grid.csv");
    let out = run(&[
        "grid", "--data", &data, "--train-per-class", "3", "--repeats", "2", "--alpha-grid",
        "0.1,1", "--beta-grid", "0.01,0.1,1", "--out", table.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(table).unwrap().lines().count(), 7);
}

#[test]
fn usage_and_parameter_errors_exit_with_one() {
    assert_eq!(run(&["fit", "--bogus"]).status.code(), Some(1));
    let tmp = tempfile::tempdir().unwrap();
    let data = gen_synth(tmp.path());
    let model = tmp.path().join("m.json");
    let out = run(&["fit", "--data", &data, "--alpha", "0", "--out", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!model.exists());
}

#[test]
fn data_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.csv");
    let model = tmp.path().join("m.json");
    let out = run(&["fit", "--data", missing.to_str().unwrap(), "--out", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "a,1.0\nb,oops\n").unwrap();
    let out = run(&["fit", "--data", bad.to_str().unwrap(), "--out", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
