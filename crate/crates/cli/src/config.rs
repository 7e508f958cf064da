//! Flags merged over an optional JSON config file; flags win.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

fn read_config(path: &Path) -> CliResult<Map<String, Value>> {
    let bytes = std::fs::read(path)?;
    match serde_json::from_slice(&bytes) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Parse(format!(
            "{}: config must be a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::Parse(format!("{}: {e}", path.display()))),
    }
}

/// Returns the merged parameters and their JSON echo. Config keys use the
/// flag names with `-` replaced by `_`.
pub fn resolve<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> CliResult<(T, Value)> {
    let mut merged = match config {
        Some(p) => read_config(p)?,
        None => Map::new(),
    };
    let Value::Object(set) = serde_json::to_value(flags).map_err(|e| CliError::Parse(e.to_string()))? else {
        unreachable!("parameter structs serialize to objects");
    };
    merged.extend(set);
    let echo = Value::Object(merged);
    let params = serde_json::from_value(echo.clone()).map_err(|e| CliError::Parse(format!("config: {e}")))?;
    Ok((params, echo))
}
