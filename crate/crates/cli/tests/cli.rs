use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/examples")
        .join(name)
        .display()
        .to_string()
}

fn xreval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xreval")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn predict_shows_symbolic_lower_bound() {
    let model = example("paper.gomsmodel");
    let o = xreval(&["predict", "--catalog", &example("paper.gomsops"), "--model", &model]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let md = stdout(&o);
    assert!(md.contains("7809 + A (lower bound 7809)"));
    assert_eq!(md.matches("\n### ").count(), 3);
}

#[test]
fn predict_repeat_scales_resolved_totals() {
    let model = example("paper.gomsmodel");
    let o = xreval(&["predict", "--model", &model, "--bind", "A=500", "--repeat", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let totals: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
    assert_eq!(totals, ["23655", "29665", "41545"]);
}

#[test]
fn compare_orders_shipped_modes() {
    let model = example("paper.gomsmodel");
    let o = xreval(&["compare", "--model", &model, "--bind", "A=0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "rank,mode,total_ms\n1,Eye-gaze & Pinch,4731\n2,Eye-gaze & Voice,5933\n3,Drag & Drop,7809\n"
    );
}

#[test]
fn compare_two_modes() {
    let model = temp_file("two.gomsmodel", "mode \"slow\": 3*M\nmode \"fast\": S\n");
    let o = xreval(&["compare", "--model", &model, "--format", "csv"]);
    assert_eq!(stdout(&o), "rank,mode,total_ms\n1,fast,13\n2,slow,4050\n");
}

#[test]
fn unbound_parameter_is_a_validation_error() {
    let o = xreval(&["compare", "--model", &example("paper.gomsmodel")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unbound parameter A"));
}

#[test]
fn missing_file_names_the_path() {
    let o = xreval(&["predict", "--model", "/definitely/not/here.gomsmodel"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/definitely/not/here.gomsmodel"));
}

#[test]
fn parse_errors_carry_location() {
    let model = temp_file("broken.gomsmodel", "mode \"x\": S\nmode \"y\": S + 2M\n");
    let o = xreval(&["predict", "--model", &model]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(&format!("{model}:2:16:")), "{}", stderr(&o));
}

#[test]
fn bad_bind_value_is_rejected() {
    let o = xreval(&["predict", "--model", &example("paper.gomsmodel"), "--bind", "A=-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_csv_lists_steps() {
    let model = example("paper.gomsmodel");
    let o = xreval(&["sweep", "--model", &model, "--param", "A", "--from", "0", "--to", "1000", "--step", "250", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn survey_score_reports_bad_rows_and_keeps_good_ones() {
    let demo = std::fs::read_to_string(example("survey_demo.csv")).unwrap();
    let mut lines: Vec<String> = demo.lines().take(3).map(str::to_string).collect();
    let mut bad: Vec<String> = lines[2].split(',').map(str::to_string).collect();
    bad[2] = "9".into();
    lines[2] = bad.join(",");
    let input = temp_file("mixed.csv", &(lines.join("\n") + "\n"));
    let o = xreval(&["survey-score", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(stderr(&o).contains("sus_1 out of range [1,5] (got 9) at row 3"), "{}", stderr(&o));
}

#[test]
fn survey_score_with_no_valid_rows_fails() {
    let demo = std::fs::read_to_string(example("survey_demo.csv")).unwrap();
    let header = demo.lines().next().unwrap();
    let input = temp_file("empty.csv", &format!("{header}\n"));
    let o = xreval(&["survey-score", "--input", &input]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn survey_analyze_writes_to_file() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("analysis.json");
    let out = out.display().to_string();
    let input = example("survey_demo.csv");
    let o = xreval(&["survey-analyze", "--input", &input, "--measure", "tlx:effort", "--format", "json", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json = std::fs::read_to_string(&out).unwrap();
    assert!(json.contains("\"measure\": \"tlx:effort\""));
    assert!(json.contains("\"predictions\": null"));
}

#[test]
fn survey_analyze_has_no_csv_form() {
    let o = xreval(&["survey-analyze", "--input", &example("survey_demo.csv"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_measure_is_rejected() {
    let o = xreval(&["survey-analyze", "--input", &example("survey_demo.csv"), "--measure", "tlx:mood"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown measure"));
}
