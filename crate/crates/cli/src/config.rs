//! Run configuration: defaults, then a key-value file, then HKSYM_JOBS, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Markdown,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(ConfigError::Value { key: "output".into(), value: s.into() }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "markdown",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// coordinate bound for decomposition and representation searches
    pub search_box: u64,
    #[serde(with = "hksym_core::serde_big::opt")]
    pub window_override: Option<BigInt>,
    pub output: OutputFormat,
    pub jobs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { search_box: 40, window_override: None, output: OutputFormat::Json, jobs: 1 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    Value { key: String, value: String },
    #[error("{0} must be at least 1")]
    TooSmall(&'static str),
}

/// Flag values that override the file and the environment.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub search_box: Option<u64>,
    pub window_override: Option<BigInt>,
    pub output: Option<OutputFormat>,
    pub jobs: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::Value { key: key.into(), value: value.into() })
}

impl Config {
    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "search_box" => self.search_box = parse_value(key, value)?,
                "window_override" => {
                    self.window_override =
                        if value.is_empty() || value == "none" { None } else { Some(parse_value(key, value)?) }
                }
                "output" => self.output = value.parse()?,
                "jobs" => self.jobs = parse_value(key, value)?,
                _ => return Err(ConfigError::UnknownKey(key.into())),
            }
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(x) = o.search_box {
            self.search_box = x;
        }
        if let Some(x) = &o.window_override {
            self.window_override = Some(x.clone());
        }
        if let Some(x) = o.output {
            self.output = x;
        }
        if let Some(x) = o.jobs {
            self.jobs = x;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.search_box < 1 {
            return Err(ConfigError::TooSmall("search_box"));
        }
        if self.jobs < 1 {
            return Err(ConfigError::TooSmall("jobs"));
        }
        Ok(())
    }

    /// Resolve the full precedence chain. `env` looks up environment variables.
    pub fn resolve(
        explicit: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
        flags: &Overrides,
    ) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        if let Some(path) = discover(explicit, &env) {
            let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Read {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            cfg.apply_text(&text)?;
        }
        if let Some(j) = env("HKSYM_JOBS") {
            cfg.jobs = parse_value("HKSYM_JOBS", j.trim())?;
        }
        cfg.apply_overrides(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `--config`, else $HKSYM_CONFIG, else ./hksym.conf when present.
fn discover(explicit: Option<&Path>, env: &impl Fn(&str) -> Option<String>) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    if let Some(p) = env("HKSYM_CONFIG") {
        return Some(PathBuf::from(p));
    }
    let local = PathBuf::from("hksym.conf");
    local.is_file().then_some(local)
}
