//! Data files: bundled at compile time, overridable at run time through
//! the `FUSIONKIT_DATA` directory.

use std::path::PathBuf;

use thiserror::Error;

include!(concat!(env!("OUT_DIR"), "/bundled.rs"));

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DataError {
    #[error("{0}")]
    Missing(String),
    #[error("{0}: {1}")]
    Io(String, String),
}

/// Directory named by `FUSIONKIT_DATA`, if set.
pub fn data_dir() -> Option<PathBuf> {
    std::env::var_os("FUSIONKIT_DATA").filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Read `rel` (e.g. `graphs/sl3_E_5.json`) from the override directory, or
/// from the bundled copy when no override is set.
pub fn read_data_file(rel: &str) -> Result<String, DataError> {
    match data_dir() {
        Some(dir) => {
            let path = dir.join(rel);
            if !path.exists() {
                return Err(DataError::Missing(path.display().to_string()));
            }
            std::fs::read_to_string(&path).map_err(|e| DataError::Io(path.display().to_string(), e.to_string()))
        }
        None => BUNDLED
            .iter()
            .find(|(name, _)| *name == rel)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| DataError::Missing(format!("<bundled>/{rel}"))),
    }
}

/// Names of all bundled files.
pub fn bundled_files() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}
