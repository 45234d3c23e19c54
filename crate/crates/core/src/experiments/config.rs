use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{input, Error, Result};

/// Flat `key = value` configuration. Blank lines and `#` comments are skipped;
/// lists are comma separated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentConfig {
    values: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return input(format!("config line {}: expected key = value", i + 1));
            };
            let k = k.trim();
            if k.is_empty() {
                return input(format!("config line {}: empty key", i + 1));
            }
            let v = v.trim().trim_matches('"');
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return input(format!("config line {}: duplicate key {k}", i + 1));
            }
        }
        Ok(ExperimentConfig { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Input(format!("config key {key}: cannot parse '{v}'"))),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str, default: &[T]) -> Result<Vec<T>>
    where
        T: Clone,
    {
        match self.values.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| Error::Input(format!("config key {key}: cannot parse '{s}'"))))
                .collect(),
        }
    }

    /// Config values the run actually used, defaults included.
    pub(crate) fn echo(&self, used: &[(&str, String)]) -> BTreeMap<String, String> {
        let mut out = self.values.clone();
        for (k, v) in used {
            out.entry(k.to_string()).or_insert_with(|| v.clone());
        }
        out
    }
}
