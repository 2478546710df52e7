//! Flat `key = value` text files shared by the environment, trainer and
//! experiment configs.
//!
//! `#` starts a comment that runs to the end of the line. Blank lines are
//! ignored. Keys are unique.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KvError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value {value:?} for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
}

/// Parses the text into `(key, value)` pairs in file order.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, KvError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(KvError::Malformed {
                line: i + 1,
                text: raw.to_string(),
            });
        };
        let key = k.trim();
        if key.is_empty() {
            return Err(KvError::Malformed {
                line: i + 1,
                text: raw.to_string(),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(KvError::Duplicate {
                line: i + 1,
                key: key.to_string(),
            });
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub(crate) fn parse_value<T>(key: &str, value: &str) -> Result<T, KvError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| KvError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

pub(crate) fn invalid(key: &str, value: impl ToString, reason: impl ToString) -> KvError {
    KvError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}
