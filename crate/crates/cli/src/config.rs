use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Environment variable naming an optional `key=value` configuration file.
pub const CONFIG_ENV: &str = "SUDLERLAB_CONFIG";

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub precision_bits: u32,
    pub guard_depth: usize,
    pub qcap: u64,
    pub ncap: u64,
    pub threads: Option<usize>,
    pub output_path: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 128,
            guard_depth: 8,
            qcap: sudlerlab::verify::DENOMINATOR_CAP,
            ncap: 200,
            threads: None,
            output_path: None,
        }
    }
}

fn bad(msg: String) -> CliError {
    CliError::Config(msg)
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| bad(format!("{key}: `{v}` is not a valid number")))
}

impl Config {
    /// Applies `key=value` lines on top of `self`. Blank lines and `#` comments are skipped.
    pub fn apply_text(mut self, text: &str) -> Result<Self, CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key=value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "precision_bits" => self.precision_bits = number(key, value)?,
                "guard_depth" => self.guard_depth = number(key, value)?,
                "qcap" => self.qcap = number(key, value)?,
                "ncap" => self.ncap = number(key, value)?,
                "threads" => self.threads = Some(number(key, value)?),
                "output_path" => self.output_path = Some(PathBuf::from(value)),
                _ => return Err(bad(format!("line {}: unknown key `{key}`", i + 1))),
            }
        }
        Ok(self)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Config::default().apply_text(&text)
    }

    /// Defaults, overridden by the file named in `SUDLERLAB_CONFIG` when set.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::from_file(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < 64 {
            return Err(bad(format!(
                "precision_bits = {} < 64",
                self.precision_bits
            )));
        }
        if self.qcap < 2 || self.ncap < 2 {
            return Err(bad(format!(
                "caps must be at least 2 (qcap = {}, ncap = {})",
                self.qcap, self.ncap
            )));
        }
        if self.threads == Some(0) {
            return Err(bad("threads must be positive".into()));
        }
        Ok(())
    }
}
