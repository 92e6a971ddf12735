//! Scenario files: TOML documents mapping one-to-one onto [`ScenarioConfig`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use stmr_core::engine::ScenarioConfig;
use stmr_core::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Syntax errors, unknown keys and type mismatches; the message carries
    /// the line and column.
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{}{}: {source}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Invalid {
        path: PathBuf,
        line: Option<usize>,
        source: ConfigError,
    },
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// Parses and validates scenario text; `origin` is only used in messages.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ScenarioError::Parse {
        path: origin.to_owned(),
        message: e.to_string().trim_end().to_owned(),
    })?;
    cfg.validate().map_err(|source| ScenarioError::Invalid {
        path: origin.to_owned(),
        line: locate_key(text, source.field()),
        source,
    })?;
    Ok(cfg)
}

/// 1-based line on which `field` (dotted, e.g. `init.x`) is assigned.
fn locate_key(text: &str, field: &str) -> Option<usize> {
    let (table, key) = field.rsplit_once('.').unwrap_or(("", field));
    let mut current = String::new();
    for (no, line) in text.lines().enumerate() {
        let l = line.split('#').next().unwrap_or("").trim();
        if l.starts_with('[') {
            current = l.trim_matches(|c| c == '[' || c == ']').trim().to_owned();
            continue;
        }
        let Some((k, _)) = l.split_once('=') else {
            continue;
        };
        let k = k.trim().trim_matches('"');
        let full = if current.is_empty() {
            k.to_owned()
        } else {
            format!("{current}.{k}")
        };
        if full == field || (k == key && (table.is_empty() || current == table)) {
            return Some(no + 1);
        }
    }
    None
}

/// Canonical TOML rendering of a scenario with every default filled in.
pub fn resolved_toml(cfg: &ScenarioConfig) -> String {
    toml::to_string(cfg).expect("scenario configs always serialize")
}

/// SHA-256 of the resolved TOML, hex encoded.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let digest = Sha256::digest(resolved_toml(cfg).as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest.iter() {
        write!(hex, "{b:02x}").expect("writing to a String");
    }
    hex
}
