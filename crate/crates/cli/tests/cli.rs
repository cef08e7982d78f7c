use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fbl_cli::{embedded_config, run, CliError, Command as Cmd, RunConfig};
use fbl_core::FblError;
use serde_json::Value;
use tempfile::TempDir;

fn fbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbl"))
        .args(args)
        .env("FBL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

struct Fixture {
    dir: TempDir,
    l1_2: String,
    m2: String,
    tuple: String,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let l1_2 = write(dir.path(), "l1_2.json", r#"{"kind":"l1","dim":2}"#);
    let m2 = write(
        dir.path(),
        "m2.json",
        r#"{"sup":[{"abs":{"delta":[1,0]}},{"abs":{"delta":[0,1]}}]}"#,
    );
    let tuple = write(dir.path(), "t.json", "[[1,0],[0.5,0.5]]");
    let s = |p: PathBuf| p.to_str().unwrap().to_owned();
    Fixture {
        l1_2: s(l1_2),
        m2: s(m2),
        tuple: s(tuple),
        dir,
    }
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn norm_of_m2_is_two() {
    let fx = fixture();
    let out = fbl(&["norm", "--space", &fx.l1_2, "--expr", &fx.m2, "--m", "2"]);
    let r = report(&out);
    assert_eq!(r["command"], "norm");
    assert_eq!(r["result"]["lower"].as_f64(), Some(2.0));
    assert_eq!(r["result"]["upper"].as_f64(), Some(2.0));
}

#[test]
fn admissible_reports_violation_with_exit_zero() {
    let fx = fixture();
    let out = fbl(&["admissible", "--space", &fx.l1_2, "--tuple", &fx.tuple]);
    let r = report(&out);
    assert_eq!(r["result"]["verdict"], "violated");
    assert_eq!(r["result"]["enumeration"]["verdict"], "violated");
    assert_eq!(r["result"]["per_coordinate"]["verdict"], "violated");
    assert_eq!(r["result"]["gauge"].as_f64(), Some(1.5));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let fx = fixture();
    let out = fx.dir.path().join("report.json");
    let half = write(
        fx.dir.path(),
        "half_m2.json",
        r#"{"scale":{"k":0.5,"of":{"sup":[{"abs":{"delta":[1,0]}},{"abs":{"delta":[0,1]}}]}}}"#,
    );
    let mut reports = Vec::new();
    for _ in 0..2 {
        let o = fbl(&[
            "octa",
            "--space",
            &fx.l1_2,
            "--expr",
            half.to_str().unwrap(),
            "--budget",
            "3",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(std::fs::read_to_string(&out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn invalid_input_exits_one() {
    let fx = fixture();
    let missing = fx.dir.path().join("nope.json");
    let out = fbl(&[
        "norm",
        "--space",
        &fx.l1_2,
        "--expr",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.json"));

    let bad = write(fx.dir.path(), "bad.json", r#"{"sup":[{"delta":[1,0]}]}"#);
    let out = fbl(&["norm", "--space", &fx.l1_2, "--expr", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = fbl(&[
        "norm", "--space", &fx.l1_2, "--expr", &fx.m2, "--budget", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = fbl(&["admissible", "--space", &fx.l1_2]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verification_failures_map_to_exit_two() {
    let e = CliError::from(FblError::Verification("stored witness".into()));
    assert_eq!(e.exit_code(), 2);
    assert_eq!(CliError::Input("x".into()).exit_code(), 1);
    assert_eq!(
        CliError::from(FblError::InvalidArgument("x".into())).exit_code(),
        1
    );
}

#[test]
fn embedded_config_reproduces_the_report() {
    let fx = fixture();
    let dual = write(
        fx.dir.path(),
        "a.json",
        r#"{"terms":[{"gamma":1,"xs":[1,0]},{"gamma":-1,"xs":[0,1]}]}"#,
    );
    let rough_f = write(fx.dir.path(), "e1.json", r#"{"delta":[1,0]}"#);
    let cases = [
        vec![
            "norm", "--space", &fx.l1_2, "--expr", &fx.m2, "--grid", "16",
        ],
        vec!["admissible", "--space", &fx.l1_2, "--tuple", &fx.tuple],
        vec![
            "dual-norm",
            "--space",
            &fx.l1_2,
            "--dual",
            dual.to_str().unwrap(),
        ],
        vec![
            "repr-check",
            "--space",
            &fx.l1_2,
            "--expr",
            &fx.m2,
            "--budget",
            "4",
        ],
        vec![
            "rough",
            "--space",
            &fx.l1_2,
            "--expr",
            rough_f.to_str().unwrap(),
            "--budget",
            "2",
            "--scales",
            "0.1,0.01",
        ],
    ];
    for args in cases {
        let out = fbl(&args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = String::from_utf8(out.stdout).unwrap();
        let config = embedded_config(&text).unwrap();
        assert_eq!(config.command.name(), args[0]);
        let again = run(&config).unwrap();
        assert_eq!(again.text, text.trim_end(), "{args:?}");
    }
}

#[test]
fn slice_diameter_from_the_command_line() {
    let fx = fixture();
    let half = write(
        fx.dir.path(),
        "half_m2.json",
        r#"{"scale":{"k":0.5,"of":{"sup":[{"abs":{"delta":[1,0]}},{"abs":{"delta":[0,1]}}]}}}"#,
    );
    let e1 = write(fx.dir.path(), "e1.json", r#"{"delta":[1,0]}"#);
    let out = fbl(&[
        "slice-diam",
        "--space",
        &fx.l1_2,
        "--expr",
        half.to_str().unwrap(),
        "--expr",
        e1.to_str().unwrap(),
        "--budget",
        "6",
        "--lambdas",
        "0.5,0.5",
    ]);
    let r = report(&out);
    let v = r["result"]["value"].as_f64().unwrap();
    assert!(v > 0.0 && v <= 2.0, "{v}");
}

#[test]
fn csv_summary_appends_rows_under_one_header() {
    let fx = fixture();
    let csv = fx.dir.path().join("summary.csv");
    for seed in ["0", "1"] {
        let o = fbl(&[
            "norm",
            "--space",
            &fx.l1_2,
            "--expr",
            &fx.m2,
            "--seed",
            seed,
            "--budget",
            "2",
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert_eq!(
        lines[0],
        "experiment,space,n,value,alpha,seed,budget,wall_time"
    );
    assert!(
        lines[1].starts_with("norm,l1(2),2,2.0,1.0,0,2,"),
        "{}",
        lines[1]
    );
    assert!(
        lines[2].starts_with("norm,l1(2),2,2.0,1.0,1,2,"),
        "{}",
        lines[2]
    );
}

#[test]
fn run_config_round_trips_through_json() {
    let fx = fixture();
    let out = fbl(&["norm", "--space", &fx.l1_2, "--expr", &fx.m2]);
    let config = embedded_config(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let back: RunConfig = serde_json::from_str(&serde_json::to_string(&config).unwrap()).unwrap();
    assert_eq!(back, config);
    assert_eq!(config.command, Cmd::Norm);
    assert_eq!(config.options.seed, 0);
}
