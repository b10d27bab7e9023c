//! Flat `key = value` text used by run configs and noise profiles.
//!
//! One entry per line; blank lines and `#` comments are ignored. Keys are
//! case-sensitive and may appear once.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Error::Parse { line, msg: format!("expected `key = value`, got `{body}`") })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Parse { line, msg: format!("invalid key `{key}`") });
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(Error::Parse { line, msg: format!("duplicate key `{key}`") });
        }
        entries.push(Entry { key: key.to_string(), value: value.to_string(), line });
    }
    Ok(entries)
}

/// Parses `value` for `key`, mapping failures to [`Error::InvalidValue`].
pub fn value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| Error::InvalidValue { key: key.to_string(), msg: format!("`{value}`: {e}") })
}
