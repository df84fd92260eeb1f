mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;

use common::{compare_csv, golden, read_csv, run, run_in, stderr, stdout};

#[test]
fn trace_reports_asymptotes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["trace", "--z0", "2", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trace_report.json")).unwrap()).unwrap();
    let fwd = report["report"]["forward_asymptote"].as_f64().unwrap();
    let bwd = report["report"]["backward_asymptote"].as_f64().unwrap();
    assert!(fwd.abs() < 1e-3 && (bwd - PI).abs() < 1e-3);
    let events = read_csv(&dir.path().join("trace_events.csv"));
    let kinds: Vec<&str> = events.rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(kinds, ["gamma_crossing", "height_cutoff", "theta_half_pi", "height_cutoff"]);
}

#[test]
fn minimal_trace_has_constant_first_integral() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["trace", "--z0", "2", "--a", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = read_csv(&dir.path().join("trace_orbit.csv"));
    let theta = csv.column("theta");
    let fi = csv.column("first_integral");
    let mut checked = 0;
    for (t, v) in theta.iter().zip(&fi) {
        if t.cos().powi(2) >= 1e-4 {
            assert!((v - 16.0).abs() < 1e-9, "{v}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["trace", "--z0", "-1", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("z0 must exceed z_min"));

    let o = run_in(dir.path(), &["reaper", "--z0", "1", "--a", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("minimal"));

    let o = run_in(dir.path(), &["sweep", "--z0-min", "3", "--z0-max", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["trace", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "no files on failed validation");
}

#[test]
fn classification_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["trace", "--z0", "2", "--s-max", "0.5"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("missing"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"z0": 1.0, "a": 1.0, "z_min": 0.01, "output_step": 0.05}"#).unwrap();
    let out = dir.path().join("o");
    let o = run(&["trace", "--config", cfg.to_str().unwrap(), "--z0", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("trace_report.json")).unwrap()).unwrap();
    assert_eq!(report["z0"].as_f64(), Some(3.0));
    assert_eq!(report["report"]["z_min"].as_f64(), Some(0.01));

    fs::write(&cfg, r#"{"z0": 1.0, "zz": 2}"#).unwrap();
    let o = run(&["trace", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_written_file_is_announced() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["mesh", "--family", "spherical", "--profile", "circle", "--ns", "40", "--nt", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let announced: Vec<String> =
        stdout(&o).lines().filter_map(|l| l.strip_prefix("wrote ").map(str::to_string)).collect();
    let mut on_disk: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path().to_str().unwrap().to_string()).collect();
    let mut sorted = announced.clone();
    sorted.sort();
    on_disk.sort();
    assert_eq!(sorted, on_disk);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("mesh_summary.json")).unwrap()).unwrap();
    assert!(summary["obstruction"]["c0_max_abs"].as_f64().unwrap() > 1e-3);
}

#[test]
fn horosphere_mesh_has_unit_mean_curvature() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["mesh", "--family", "horosphere", "--height", "1", "--ns", "9", "--nt", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = read_csv(&dir.path().join("mesh_residual.csv"));
    assert!(csv.column("h").iter().all(|&h| h == 1.0));
    let obj = fs::read_to_string(dir.path().join("mesh.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 81);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2 * 64);
}

#[test]
fn reaper_mesh_residual_is_small() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["mesh", "--family", "reaper", "--z0", "1", "--a", "1", "--b", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("mesh_summary.json")).unwrap()).unwrap();
    assert!(summary["analytic"]["max_abs"].as_f64().unwrap() < 1e-8);
}

#[test]
fn outputs_are_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        let o = run_in(d.path(), &["sweep", "--a", "1", "--z0-values", "0.5,1,2,4"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let o = run_in(d.path(), &["trace", "--z0", "1.5"]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["sweep.csv", "sweep_summary.json", "trace_orbit.csv", "trace_events.csv", "trace_report.json"] {
        let a = fs::read(d1.path().join(name)).unwrap();
        let b = fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name}");
        assert!(!a.contains(&b'\r'));
    }
}

#[test]
fn sweep_rows_are_bigraphs_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["sweep", "--a", "1", "--z0-values", "4,0.5,2,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(csv.column("z0"), vec![4.0, 0.5, 2.0, 1.0]);
    assert!(csv.rows.iter().all(|r| r[6] == "true"));
}

#[test]
fn portrait_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["portrait"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["portrait_gamma.csv", "portrait_orbit_0.csv"] {
        let g = read_csv(&golden(name));
        let a = read_csv(&dir.path().join(name));
        compare_csv(&g, &a, 1e-9).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let gamma = read_csv(&golden("portrait_gamma.csv"));
    for (t, z) in gamma.column("theta").iter().zip(gamma.column("z")) {
        assert!((z + t.tan()).abs() < 1e-12 * z.max(1.0));
        assert!((*t > -FRAC_PI_2 && *t < 0.0) || (*t > FRAC_PI_2 && *t < PI));
    }
    let svg = fs::read_to_string(dir.path().join("portrait.svg")).unwrap();
    assert_eq!(svg.matches("stroke-dasharray").count(), 2);
}

#[test]
fn empty_orbit_list_gives_bare_portrait() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["portrait", "--no-orbits"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!dir.path().join("portrait_orbit_0.csv").exists());
    let svg = fs::read_to_string(dir.path().join("portrait.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
}

#[test]
fn reaper_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["reaper", "--z0", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let g = read_csv(&golden("reaper_curve.csv"));
    let a = read_csv(&dir.path().join("reaper_curve.csv"));
    assert_eq!(g.meta, a.meta);
    compare_csv(&g, &a, 1e-9).unwrap();
    assert!(dir.path().join("reaper_curve.svg").exists());
}

#[test]
fn minimal_command_checks_span() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["minimal", "--z0", "1", "--no-svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!dir.path().join("minimal_curve.svg").exists());
    let csv = read_csv(&dir.path().join("minimal_curve.csv"));
    assert_eq!(csv.meta[0], "family=MinimalReaper");
    let x = csv.column("x");
    assert!((x[0] + x[x.len() - 1]).abs() < 1e-8);
}
