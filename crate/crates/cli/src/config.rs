//! Flat `key = value` config files, overridden by command-line flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Every key a config file may set. Dashes and underscores are equivalent.
pub const KNOWN_KEYS: &[&str] = &[
    "out",
    "format",
    "workers",
    "seed",
    "omega0-over-gamma",
    "zeta-over-omega0",
    "zeta-over-gamma",
    "lambda-over-gamma",
    "l-over-lambda0",
    "t-max",
    "steps",
    "solver",
    "scheme",
    "dt",
    "mode",
    "observable",
    "l-min",
    "l-max",
    "l-points",
    "t-min",
    "t-points",
    "t-spacing",
    "lambda-min",
    "lambda-max",
    "lambda-points",
    "lambda-spacing",
    "lambda-t-max",
    "time-points",
    "horizon",
    "samples-per-period",
    "min-time-points",
    "refine",
    "ensemble",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, toml::Value>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.message().to_string())?;
        let mut values = BTreeMap::new();
        for (key, value) in table {
            let norm = key.replace('_', "-");
            if !KNOWN_KEYS.contains(&norm.as_str()) {
                return Err(format!("unknown key '{key}'"));
            }
            if value.is_table() || value.is_array() {
                return Err(format!("key '{key}' must be a plain value"));
            }
            values.insert(norm, value);
        }
        Ok(Self { values })
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(bad(key, "a number", other)),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(other) => Err(bad(key, "a non-negative integer", other)),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(v)) => Ok(Some(*v)),
            Some(other) => Err(bad(key, "true or false", other)),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(other) => Err(bad(key, "a string", other)),
        }
    }

    /// Flag value, else config value, else `default`.
    pub fn pick_f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(match flag {
            Some(v) => v,
            None => self.f64(key)?.unwrap_or(default),
        })
    }

    pub fn pick_usize(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(match flag {
            Some(v) => v,
            None => self.u64(key)?.map_or(default, |v| v as usize),
        })
    }

    pub fn pick_parsed<T>(&self, flag: Option<&str>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let raw = match flag {
            Some(v) => Some(v.to_string()),
            None => self.string(key)?,
        };
        match raw {
            Some(s) => s.parse().map_err(|e: T::Err| CliError::Usage(e.to_string())),
            None => Ok(default),
        }
    }
}

fn bad(key: &str, expected: &str, got: &toml::Value) -> CliError {
    CliError::Usage(format!("config key '{key}' must be {expected}, got {got}"))
}
