use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Writes files into the output directory and announces each path on stdout.
pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: Option<&Path>) -> Result<Self, CliError> {
        let dir = dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir })
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Numerical(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, &text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

/// Verification outcomes collected during a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Checks(Vec<Check>);

impl Checks {
    /// Records `value < threshold`.
    pub fn below(&mut self, name: &str, value: f64, threshold: f64) {
        self.0.push(Check { name: name.into(), passed: value < threshold, value, threshold });
    }

    /// Records `value > threshold`.
    pub fn above(&mut self, name: &str, value: f64, threshold: f64) {
        self.0.push(Check { name: name.into(), passed: value > threshold, value, threshold });
    }

    pub fn flag(&mut self, name: &str, passed: bool) {
        let v = if passed { 1.0 } else { 0.0 };
        self.0.push(Check { name: name.into(), passed, value: v, threshold: 1.0 });
    }

    /// Fails with every missed check listed.
    pub fn finish(&self) -> Result<(), CliError> {
        let failed: Vec<String> = self
            .0
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} (value {:e}, threshold {:e})", c.name, c.value, c.threshold))
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::Verification(failed.join("; ")))
        }
    }
}
