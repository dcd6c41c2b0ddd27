//! Flat `key = value` configuration files. Blank lines and lines starting
//! with `#` are ignored; list values are comma separated.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::HarnessError;

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
    base_dir: Option<PathBuf>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(HarnessError::Parse {
                    line,
                    message: format!("expected key = value, found {trimmed:?}"),
                });
            };
            let key = key.trim().to_string();
            if entries.insert(key.clone(), (line, value.trim().to_string())).is_some() {
                return Err(HarnessError::Parse {
                    line,
                    message: format!("duplicate key {key:?}"),
                });
            }
        }
        Ok(Self {
            entries,
            base_dir: None,
        })
    }

    /// Reads a file; relative paths in it resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut kv = Self::parse(&text)?;
        kv.base_dir = path.parent().map(Path::to_path_buf);
        Ok(kv)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn error(&self, key: &str, message: String) -> HarnessError {
        match self.entries.get(key) {
            Some((line, _)) => HarnessError::Parse {
                line: *line,
                message: format!("{key}: {message}"),
            },
            None => HarnessError::Config(format!("{key}: {message}")),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| self.error(key, format!("{e} ({v:?})"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| HarnessError::Config(format!("missing required key {key:?}")))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<T>()
                    .map_err(|e| self.error(key, format!("{e} ({item:?})")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(|v| match &self.base_dir {
            Some(dir) if Path::new(v).is_relative() => dir.join(v),
            _ => PathBuf::from(v),
        })
    }

    /// Fails on keys outside `known`, which catches typos.
    pub fn check_keys(&self, known: &[&str]) -> Result<(), HarnessError> {
        match self.entries.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            Some((key, (line, _))) => Err(HarnessError::Parse {
                line: *line,
                message: format!("unknown key {key:?}"),
            }),
            None => Ok(()),
        }
    }
}
