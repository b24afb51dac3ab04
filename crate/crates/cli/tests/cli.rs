use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn revlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("REVLAB_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
fn spectrum_of_the_round_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let o = revlab(&["spectrum", "--family", "round_sphere:n=2", "--k", "3"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("family,index,eigenvalue,error_estimate\n"));
    let ev = column(&text, "eigenvalue");
    for (got, want) in ev[1..].iter().zip([2.0, 6.0, 12.0]) {
        assert!((got - want).abs() < 1e-7 * want);
    }
}

#[test]
fn bound_margin_is_positive() {
    let dir = tempfile::tempdir().unwrap();
    let o = revlab(&["bound", "--n", "2", "--k", "1", "--family", "glued:h=1e-3"], dir.path());
    assert!(o.status.success());
    let margin = column(&stdout(&o), "margin");
    assert_eq!(margin.len(), 1);
    assert!(margin[0] > 0.0);
}

#[test]
fn torus_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = revlab(&["torus", "--R", "10,100,1000", "--out", "torus.csv"], dir.path());
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("torus.csv")).unwrap();
    assert!(text.starts_with(
        "parameter,lambda,volume,product,ratio_min,ratio_max,length_ratio_min,length_ratio_max\n"
    ));
    let lam = column(&text, "lambda");
    let prod = column(&text, "product");
    assert!((lam[2] - 1.0).abs() < 1e-3);
    assert!(lam.windows(2).all(|w| (1.0 - w[1]).abs() < (1.0 - w[0]).abs()));
    assert!(prod.windows(2).all(|w| w[1] > w[0]));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("torus.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "torus");
    assert_eq!(manifest["all_converged"], true);
    assert_eq!(manifest["rows"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn identical_configs_reproduce_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "command = \"ellipse\"\ngrid = [0.2, 0.1]\nformat = \"json\"\n",
    )
    .unwrap();
    let a = revlab(&["run", "run.toml", "--out", "a.json", "--workers", "1"], dir.path());
    let b = revlab(&["run", "run.toml", "--out", "b.json", "--workers", "4"], dir.path());
    assert!(a.status.success() && b.status.success());
    let fa = fs::read(dir.path().join("a.json")).unwrap();
    let fb = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(fa, fb);
    let strip = |name: &str| {
        let mut v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        let m = v.as_object_mut().unwrap();
        m.remove("timestamp");
        m.remove("output");
        m.get_mut("config").unwrap().as_object_mut().unwrap().remove("out");
        m.get_mut("config").unwrap().as_object_mut().unwrap().remove("workers");
        v
    };
    assert_eq!(strip("a.json.manifest.json"), strip("b.json.manifest.json"));
    let report: serde_json::Value = serde_json::from_slice(&fa).unwrap();
    assert_eq!(report["kind"], "ellipse");
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn written_csv_passes_the_schema_check() {
    use revlab_core::lab::{BoundReport, SweepKind, SweepReport};
    let dir = tempfile::tempdir().unwrap();
    assert!(revlab(&["mindex", "--grid", "2,5", "--out", "m.csv"], dir.path()).status.success());
    let rows = SweepReport::rows_from_csv(SweepKind::Escalation, &fs::read_to_string(dir.path().join("m.csv")).unwrap())
        .unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].aux[0], 9.0);
    assert!(SweepReport::rows_from_csv(SweepKind::Torus, &fs::read_to_string(dir.path().join("m.csv")).unwrap()).is_err());
    let o = revlab(&["bound", "--k", "2", "--family", "round_sphere"], dir.path());
    let rows = BoundReport::rows_from_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 2);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["spectrum", "--family", "bogus"][..],
        &["spectrum"][..],
        &["torus", "--R", "2,5,3"][..],
        &["spectrum", "--family", "round_sphere:n=3", "--n", "2"][..],
        &["probe", "--family", "homothety"][..],
        &["ellipse", "--tol", "-1"][..],
        &["frobnicate"][..],
    ] {
        let o = revlab(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    fs::write(dir.path().join("bad.toml"), "command = \"torus\"\nradius = 3\n").unwrap();
    assert_eq!(revlab(&["run", "bad.toml"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("nocmd.toml"), "tol = 1e-6\n").unwrap();
    assert_eq!(revlab(&["run", "nocmd.toml"], dir.path()).status.code(), Some(2));
}

#[test]
fn cache_directory_memoizes_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_revlab"))
            .args(["modes", "--family", "torus:R=3", "--l", "0,1", "--k", "2"])
            .env("REVLAB_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 2);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn probe_reports_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = revlab(&["probe", "--family", "spheroid", "--format", "json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["non_extremal_witness"], true);
}
