//! `key=value` configuration files.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// One `key=value` entry. Keys are flag names without the leading dashes;
/// `_` is accepted in place of `-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parse a config file. Blank lines and lines starting with `#` are skipped;
/// keys and values are trimmed; a key may appear only once.
pub fn parse_config(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| ConfigError { line, message };
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {trimmed:?}")))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') || key.starts_with('-') {
            return Err(err(format!("invalid key {key:?}")));
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key) {
            return Err(err(format!("duplicate key {key:?} (first set on line {})", prev.line)));
        }
        entries.push(Entry {
            line,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}
