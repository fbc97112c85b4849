use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use reachkit_core::io::to_json_string;
use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

/// Writes `text` to `path` through a temporary file in the same directory, or
/// to standard output.
pub fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
        Some(p) => write_atomic(p, text),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| CliError::Domain(format!("cannot create a file in {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Domain(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

/// Renders a report object. TSV has one `key<TAB>value` line per field, with
/// nested values in compact JSON.
pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => to_json_string(v),
        Format::Tsv => match v {
            Value::Object(m) => m
                .iter()
                .map(|(k, x)| {
                    let cell = match x {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    format!("{k}\t{cell}\n")
                })
                .collect(),
            other => format!("{other}\n"),
        },
    }
}
