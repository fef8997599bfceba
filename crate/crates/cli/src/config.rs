//! Optional flat key/value configuration file. Keys are the long flag names
//! (`mc-samples`, `n-cells`, ...); underscores are accepted in place of
//! hyphens. Command-line flags take precedence over the file.

use std::fs;
use std::path::Path;

use toml::{Table, Value};

use crate::Failure;

const KNOWN_KEYS: &[&str] = &[
    "threads", "model", "vary", "grid", "mc-samples", "seed", "out", "json", "n-cells", "ps",
    "noise", "beta", "rd", "re", "rs", "cells", "nodes",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    table: Table,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Failure::Config(msg) => Failure::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        let raw: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Failure::Config(e.message().to_string()))?;
        let mut table = Table::new();
        for (key, value) in raw {
            let norm = key.replace('_', "-");
            if !KNOWN_KEYS.contains(&norm.as_str()) {
                return Err(Failure::Config(format!("unknown key {key:?}")));
            }
            if matches!(value, Value::Table(_)) {
                return Err(Failure::Config(format!("key {key:?}: nested tables are not supported")));
            }
            table.insert(norm, value);
        }
        Ok(Self { table })
    }

    fn bad(key: &str, want: &str, v: &Value) -> Failure {
        Failure::Config(format!("config key {key:?}: expected {want}, got {v}"))
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, Failure> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => Err(Self::bad(key, "a number", v)),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, Failure> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(v) => Err(Self::bad(key, "a nonnegative integer", v)),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, Failure> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(Self::bad(key, "a string", v)),
        }
    }

    /// A grid given either as an array of numbers or a comma-separated string.
    pub fn grid(&self, key: &str) -> Result<Option<Vec<f64>>, Failure> {
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => parse_grid(s).map(Some),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    other => Err(Self::bad(key, "numbers", other)),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(v) => Err(Self::bad(key, "an array or comma list", v)),
        }
    }
}

pub fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Config(format!("bad grid value {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_flat_keys() {
        let c = FileConfig::parse("mc_samples = 20000\ngrid = [1, 2.5]\nmodel = \"relay\"\nps = 3").unwrap();
        assert_eq!(c.u64("mc-samples").unwrap(), Some(20_000));
        assert_eq!(c.grid("grid").unwrap(), Some(vec![1.0, 2.5]));
        assert_eq!(c.string("model").unwrap().as_deref(), Some("relay"));
        assert_eq!(c.f64("ps").unwrap(), Some(3.0));
        assert_eq!(c.f64("beta").unwrap(), None);
    }

    #[test]
    fn rejects_unknown_and_mistyped() {
        assert!(FileConfig::parse("colour = 1").is_err());
        assert!(FileConfig::parse("[section]\nps = 1").is_err());
        let c = FileConfig::parse("seed = -1\nps = \"x\"").unwrap();
        assert!(c.u64("seed").is_err());
        assert!(c.f64("ps").is_err());
    }

    #[test]
    fn grid_strings() {
        assert_eq!(parse_grid("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_grid("1,,2").is_err());
        assert!(parse_grid("").unwrap().is_empty());
    }
}
