//! Flat `key = value` configuration files.
//!
//! Resolution order for every setting: command-line flag, then config file,
//! then (tolerance only) the `EVAC_TOL` environment variable, then the default.

use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};
use crate::sweep::Scale;

pub const TOL_ENV: &str = "EVAC_TOL";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub points: Option<usize>,
    pub scale: Option<Scale>,
    pub maxspeed: Option<f64>,
    pub horizon: Option<f64>,
}

fn value<T: FromStr>(line_no: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| CliError::Parse(format!("line {line_no}: bad value for `{key}`: {raw:?}")))
}

fn set<T>(slot: &mut Option<T>, line_no: usize, key: &str, v: T) -> Result<()> {
    if slot.replace(v).is_some() {
        return Err(CliError::Parse(format!(
            "line {line_no}: duplicate key `{key}`"
        )));
    }
    Ok(())
}

impl Config {
    /// Blank lines and lines starting with `#` are ignored. Unknown or repeated
    /// keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("line {n}: expected key = value")))?;
            let (key, raw) = (key.trim(), raw.trim());
            match key {
                "tol" => set(&mut cfg.tol, n, key, value(n, key, raw)?)?,
                "grid" => set(&mut cfg.grid, n, key, value(n, key, raw)?)?,
                "points" => set(&mut cfg.points, n, key, value(n, key, raw)?)?,
                "scale" => set(&mut cfg.scale, n, key, value(n, key, raw)?)?,
                "maxspeed" => set(&mut cfg.maxspeed, n, key, value(n, key, raw)?)?,
                "horizon" => set(&mut cfg.horizon, n, key, value(n, key, raw)?)?,
                _ => return Err(CliError::Parse(format!("line {n}: unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Quadrature tolerance from flag, file, `env_tol` (the raw `EVAC_TOL`), default.
    pub fn tolerance(&self, flag: Option<f64>, env_tol: Option<&str>) -> Result<f64> {
        let tol = match (flag, self.tol, env_tol) {
            (Some(t), _, _) | (None, Some(t), _) => t,
            (None, None, Some(raw)) => raw
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("{TOL_ENV}: not a number: {raw:?}")))?,
            (None, None, None) => evac_core::DEFAULT_TOL,
        };
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Invalid(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(tol)
    }
}
