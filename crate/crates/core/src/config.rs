//! Run configuration: defaults, `verify.cfg`, the `KL_SEED` environment
//! variable and command-line flags, applied in that order.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLE_COUNT: usize = 100;
pub const DEFAULT_PROFILE: &str = "secant:1";
pub const CONFIG_FILE_NAME: &str = "verify.cfg";
pub const SEED_ENV_VAR: &str = "KL_SEED";

/// Named tolerances and their defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 14] = [
    ("gamma", 1e-7),
    ("curvature", 1e-6),
    ("identity", 1e-10),
    ("ricci_identity", 1e-5),
    ("scalar", 1e-8),
    ("killing", 1e-6),
    ("rank", 1e-9),
    ("rank_gap", 1e6),
    ("transport", 1e-6),
    ("ode", 1e-10),
    ("hyperboloid", 1e-12),
    ("induced_metric", 1e-7),
    ("sectional", 1e-6),
    ("first_compat", 1e-9),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!("unknown output format '{other}' (json or csv)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub profile: String,
    pub seed: u64,
    pub sample_count: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            profile: DEFAULT_PROFILE.to_string(),
            seed: DEFAULT_SEED,
            sample_count: DEFAULT_SAMPLE_COUNT,
            tolerances: DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            format: OutputFormat::Json,
            output: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value '{value}' for '{key}'")))
}

impl RunConfig {
    /// Tolerance by name; unknown names are a programming error caught by
    /// [`RunConfig::set_tolerance`], so a missing entry falls back to the
    /// default table.
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| DEFAULT_TOLERANCES.iter().find(|(k, _)| *k == name).map(|(_, v)| *v))
            .unwrap_or_else(|| panic!("unknown tolerance '{name}'"))
    }

    pub fn set_tolerance(&mut self, name: &str, value: f64) -> Result<()> {
        if !DEFAULT_TOLERANCES.iter().any(|(k, _)| *k == name) {
            let known: Vec<&str> = DEFAULT_TOLERANCES.iter().map(|(k, _)| *k).collect();
            return Err(Error::Parse(format!(
                "unknown tolerance '{name}'; known: {}",
                known.join(", ")
            )));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Parse(format!("tolerance '{name}' must be positive, got {value}")));
        }
        self.tolerances.insert(name.to_string(), value);
        Ok(())
    }

    /// Applies one `key=value` setting. Keys: `profile`, `seed`,
    /// `sample_count` (alias `samples`), `format`, `output`, `tol.<name>`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "profile" => self.profile = value.trim().to_string(),
            "seed" => self.seed = parse_value(key, value)?,
            "sample_count" | "samples" => {
                let n: usize = parse_value(key, value)?;
                if n == 0 {
                    return Err(Error::Parse("sample_count must be at least 1".into()));
                }
                self.sample_count = n;
            }
            "format" => self.format = value.parse()?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            _ => match key.strip_prefix("tol.") {
                Some(name) => self.set_tolerance(name, parse_value(key, value)?)?,
                None => return Err(Error::Parse(format!("unknown configuration key '{key}'"))),
            },
        }
        Ok(())
    }

    /// Applies the lines of a `verify.cfg` file: `key=value`, blank lines
    /// and `#` comments allowed.
    pub fn apply_file_contents(&mut self, contents: &str) -> Result<()> {
        for (n, raw) in contents.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got '{raw}'", n + 1)))?;
            self.apply(k, v)
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.apply_file_contents(&text)
    }

    /// Seed override from the environment value, if set.
    pub fn apply_seed_env(&mut self, value: Option<&str>) -> Result<()> {
        if let Some(v) = value {
            self.seed = parse_value(SEED_ENV_VAR, v)?;
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configuration is serializable")
    }
}
