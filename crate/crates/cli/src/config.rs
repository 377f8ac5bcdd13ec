//! Configuration resolution: command-line flags take precedence over the
//! environment, which takes precedence over an optional JSON config
//! file; everything falls back to defaults.

use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "VINOGRADOV_CACHE_DIR";

/// Shape of the optional JSON config file.
#[derive(Debug, Default, Deserialize)]
pub struct FileConfig {
    pub cache_dir: Option<PathBuf>,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config file {}: {e}", path.display()))
}

/// Resolve the cache directory: `--cache-dir` flag, then the
/// `VINOGRADOV_CACHE_DIR` environment variable, then the config file,
/// then none (caching disabled).
pub fn resolve_cache_dir(
    flag: Option<PathBuf>,
    config_path: Option<&Path>,
) -> Result<Option<PathBuf>, String> {
    if let Some(dir) = flag {
        return Ok(Some(dir));
    }
    if let Ok(value) = std::env::var(CACHE_ENV) {
        if !value.is_empty() {
            return Ok(Some(PathBuf::from(value)));
        }
    }
    if let Some(path) = config_path {
        let file = load_file_config(path)?;
        if let Some(dir) = file.cache_dir {
            return Ok(Some(dir));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_wins_over_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"cache_dir": "/from/config"}"#).unwrap();
        let got = resolve_cache_dir(Some(PathBuf::from("/from/flag")), Some(&cfg)).unwrap();
        assert_eq!(got, Some(PathBuf::from("/from/flag")));
        // Without the flag (and with the env var unset in this test
        // binary), the config file is consulted.
        if std::env::var(CACHE_ENV).is_err() {
            let got = resolve_cache_dir(None, Some(&cfg)).unwrap();
            assert_eq!(got, Some(PathBuf::from("/from/config")));
        }
    }

    #[test]
    fn bad_config_file_is_a_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, "{ not json").unwrap();
        assert!(resolve_cache_dir(None, Some(&cfg)).is_err());
    }
}
