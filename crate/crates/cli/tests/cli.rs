use std::path::Path;
use std::process::{Command, Output};

const HOLE: &str = r#"[[0, "2^(-1/3)", "2^(-1/3)"], ["2^(-1/3)", 0, "2^(-1/3)"], ["2^(-1/3)", "2^(-1/3)", 0]]"#;

fn projdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projdim")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&projdim(&["validate", "--preset", "rauzy"])), 0);

    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(code(&projdim(&["validate", "--config", &bad])), 1);

    let overlap = format!(
        r#"{{"name": "overlap", "dimension": 2,
            "generators": [[[1,1,1],[0,1,0],[0,0,1]], [[1,1,1],[0,1,0],[0,0,1]], [[1,0,0],[0,1,0],[1,1,1]]],
            "holes": [{HOLE}]}}"#
    );
    let overlap = write(dir.path(), "overlap.json", &overlap);
    assert_eq!(code(&projdim(&["validate", "--config", &overlap])), 2);
}

#[test]
fn dimension_rejects_shallow_depth() {
    let o = projdim(&["dimension", "--preset", "rauzy", "--method", "sigma", "--depth", "3"]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("depth 3 too small"));
}

#[test]
fn sigma_estimate_is_reported() {
    let o = projdim(&["dimension", "--method", "sigma", "--depth", "8", "--sequential"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("box-dimension,level-growth-root,"));
    let point: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((1.0..2.0).contains(&point));
}

#[test]
fn series_outputs_are_reproducible_with_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = projdim(&[
            "series", "--kind", "hole-series", "--param", "-0.3", "--depth", "6", "--sequential", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let manifest = dir.path().join(format!("{name}.manifest.json"));
        let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
        assert_eq!(m["command"], "series");
        assert!(m["arguments"].as_array().unwrap().iter().any(|a| a == "--sequential"));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "kind,parameter,level,level_sum_log,cumulative");
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn hole_volumes_accumulate_toward_the_simplex() {
    let o = projdim(&["series", "--kind", "hole-series", "--param", "0", "--depth", "8", "--sequential"]);
    let csv = String::from_utf8(o.stdout).unwrap();
    let cum: Vec<f64> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert!(cum.windows(2).all(|w| w[1] > w[0]));
    assert!(*cum.last().unwrap() < 3f64.sqrt() / 2.0);
}

#[test]
fn norm_series_at_zero_counts_words() {
    let total = |args: &[&str]| -> f64 {
        let csv = String::from_utf8(projdim(args).stdout).unwrap();
        csv.lines().last().unwrap().rsplit(',').next().unwrap().parse().unwrap()
    };
    let norm = total(&["series", "--kind", "norm-series", "--param", "0", "--norm-cap", "500"]);
    let count = total(&["series", "--kind", "counting-function", "--norm-cap", "500"]);
    assert_eq!(norm, count);
}

#[test]
fn render_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = |depth: &str, name: &str| {
        let out = dir.path().join(name);
        let o = projdim(&["render", "--depth", depth, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert!(dir.path().join(format!("{name}.manifest.json")).exists());
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(svg("0", "d0.svg").matches("<polygon").count(), 4);
    assert_eq!(svg("1", "d1.svg").matches("<polygon").count(), 10);
    assert_eq!(svg("4", "a.svg"), svg("4", "b.svg"));

    let tetra = r#"{"name": "tetra", "dimension": 3,
        "generators": [[[1,1,1,1],[0,1,0,0],[0,0,1,0],[0,0,0,1]], [[1,0,0,0],[1,1,1,1],[0,0,1,0],[0,0,0,1]],
                       [[1,0,0,0],[0,1,0,0],[1,1,1,1],[0,0,0,1]], [[1,0,0,0],[0,1,0,0],[0,0,1,0],[1,1,1,1]]],
        "holes": [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]]}"#;
    let tetra = write(dir.path(), "tetra.json", tetra);
    let o = projdim(&["render", "--config", &tetra]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("render supports d = 2 only"));
}
