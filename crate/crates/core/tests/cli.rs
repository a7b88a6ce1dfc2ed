use std::path::Path;
use std::process::{Command, Output};

fn mealsim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mealsim"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const TWO_MODELS: &str = r#"
[scenario]
models = ["hovorka", "dalla_man"]
horizon = 300
output_interval = 2
carbs = [90]

[[meal]]
time = 0
carbs = 90
"#;

#[test]
fn list_models_prints_characteristics() {
    let dir = tempfile::tempdir().unwrap();
    let out = mealsim(&["list-models"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = |id: &str| {
        text.lines()
            .find(|l| l.starts_with(id))
            .unwrap()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
    };
    assert_eq!(line("dalla_man"), "dalla_man ODEs 3 no yes");
    assert_eq!(
        line("cstr_pfr_open"),
        "cstr_pfr_open ODEs and PDEs 1 + M yes yes"
    );
    assert_eq!(line("alskar"), "alskar ODEs 4 no no");
}

#[test]
fn compare_writes_csv_summary_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", TWO_MODELS);
    let out = mealsim(&["compare", "--config", &cfg, "--out", "o"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("o/comparison.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "time_min,hovorka_90g,dalla_man_90g");
    assert_eq!(csv.lines().count(), 152);
    assert!(!csv.contains('\r'));
    let script = std::fs::read_to_string(dir.path().join("o/comparison.gp")).unwrap();
    assert!(script.contains("'comparison.csv' using 1:3"));
    let summary = std::fs::read_to_string(dir.path().join("o/summary.csv")).unwrap();
    let dm = summary
        .lines()
        .find(|l| l.starts_with("dalla_man_90g"))
        .unwrap();
    assert_eq!(dm.split(',').nth(6), Some("2"));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", TWO_MODELS);
    for out in ["a", "b"] {
        assert!(
            mealsim(&["compare", "--config", &cfg, "--out", out], dir.path())
                .status
                .success()
        );
    }
    let a = std::fs::read(dir.path().join("a/comparison.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/comparison.csv")).unwrap();
    assert_eq!(a, b);

    let mut rdr = csv::Reader::from_path(dir.path().join("a/comparison.csv")).unwrap();
    for rec in rdr.records() {
        for field in rec.unwrap().iter() {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), field);
        }
    }
}

#[test]
fn per_kg_divides_by_model_body_weight() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", TWO_MODELS);
    assert!(
        mealsim(&["compare", "--config", &cfg, "--out", "raw"], dir.path())
            .status
            .success()
    );
    assert!(mealsim(
        &["compare", "--config", &cfg, "--out", "kg", "--per-kg"],
        dir.path()
    )
    .status
    .success());
    let read = |d: &str| {
        let mut rdr = csv::Reader::from_path(dir.path().join(d).join("comparison.csv")).unwrap();
        rdr.records()
            .map(|r| {
                r.unwrap()
                    .iter()
                    .map(|f| f.parse::<f64>().unwrap())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let (raw, kg) = (read("raw"), read("kg"));
    let row = 20;
    assert!((raw[row][1] / kg[row][1] - 82.0).abs() < 1e-12);
    assert!((raw[row][2] / kg[row][2] - 91.0).abs() < 1e-12);
}

#[test]
fn run_writes_states_and_accepts_scheme_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "[scenario]\nmodel = \"cstr_pfr_alskar\"\nhorizon = 60\n[[meal]]\ntime = 0\ncarbs = 45\n",
    );
    let out = mealsim(
        &[
            "run",
            "--config",
            &cfg,
            "--out",
            "r",
            "--scheme",
            "sg",
            "--resolution",
            "12",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("r/cstr_pfr_alskar.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header[..3], ["time_min", "r_a", "m_s"]);
    assert_eq!(header.len(), 3 + 13);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "[scenario]\nmodel = \"hovorka\"\n\n[hovorka]\ntau_d_ = 30\n",
    );
    let out = mealsim(&["run", "--config", &cfg], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5") && err.contains("tau_d"), "{err}");

    let cfg = write(dir.path(), "bad2.toml", "[scenario]\nhorizon = 0\n");
    assert!(!mealsim(&["run", "--config", &cfg], dir.path())
        .status
        .success());
}

#[test]
fn check_linearity_agrees_with_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "[scenario]\nmodels = [\"simo\", \"alskar\"]\nhorizon = 400\ncarbs = [45, 90, 180]\n",
    );
    let out = mealsim(&["check-linearity", "--config", &cfg], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("simo               LINEAR"));
    assert!(text.contains("alskar             NONLINEAR"));
}

#[test]
fn delay_demo_writes_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    let out = mealsim(&["delay-demo", "--out", "d", "--stages", "4"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("d/delay_demo.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "time_min,input,exact,lag,pade,transport,algebraic"
    );
}
