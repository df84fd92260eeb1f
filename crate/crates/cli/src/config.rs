//! Merging of command-line flags over a JSON configuration file.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Overlays the flags that were given on the file's values.
///
/// Unset flags serialize as `null` (or `false` for switches) and leave the
/// file value in place. Unknown keys in the file are rejected.
pub fn merge<T>(flags: T, config: Option<&Path>) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned + Default,
{
    let Some(path) = config else {
        return Ok(flags);
    };
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display())))?;
    let Value::Object(mut merged) = file else {
        return Err(CliError::Usage(format!("config {} must be a JSON object", path.display())));
    };
    let known = as_object(T::default())?;
    if let Some(key) = merged.keys().find(|k| !known.contains_key(*k)) {
        return Err(CliError::Usage(format!("unknown config key '{key}' in {}", path.display())));
    }
    for (key, value) in as_object(flags)? {
        let unset = value.is_null() || value == Value::Bool(false);
        if !unset || !merged.contains_key(&key) {
            merged.insert(key, value);
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn as_object<T: Serialize>(v: T) -> Result<Map<String, Value>, CliError> {
    match serde_json::to_value(v) {
        Ok(Value::Object(m)) => Ok(m),
        _ => Err(CliError::Usage("arguments do not serialize to an object".into())),
    }
}
