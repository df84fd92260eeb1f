#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypreaper")).args(args).output().expect("binary runs")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut full: Vec<&str> = args.to_vec();
    let out = dir.to_str().expect("utf-8 path");
    full.extend(["--out", out]);
    run(&full)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn column(&self, name: &str) -> Vec<f64> {
        let k = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().expect("numeric")).collect()
    }
}

pub fn read_csv(path: &Path) -> Csv {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut meta = Vec::new();
    let mut lines = text.lines();
    let mut header = None;
    for line in lines.by_ref() {
        if let Some(m) = line.strip_prefix("# ") {
            meta.push(m.to_string());
        } else {
            header = Some(line.split(',').map(str::to_string).collect());
            break;
        }
    }
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    Csv { meta, header: header.expect("header row"), rows }
}

/// Same shape, equal text fields, numeric fields within `tol` relative.
pub fn compare_csv(golden: &Csv, actual: &Csv, tol: f64) -> Result<(), String> {
    if golden.header != actual.header {
        return Err(format!("header {:?} != {:?}", actual.header, golden.header));
    }
    if golden.rows.len() != actual.rows.len() {
        return Err(format!("{} rows, golden has {}", actual.rows.len(), golden.rows.len()));
    }
    let mut worst = 0.0_f64;
    for (i, (g, a)) in golden.rows.iter().zip(&actual.rows).enumerate() {
        for (gf, af) in g.iter().zip(a) {
            match (gf.parse::<f64>(), af.parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    let d = (x - y).abs() / x.abs().max(1.0);
                    worst = worst.max(d);
                    if d.is_nan() || d > tol {
                        return Err(format!("row {i}: {af} vs golden {gf}"));
                    }
                }
                _ if gf == af => {}
                _ => return Err(format!("row {i}: '{af}' vs golden '{gf}'")),
            }
        }
    }
    Ok(())
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
