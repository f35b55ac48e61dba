//! Process-wide numerical tolerances.
//!
//! Every kernel reads the current values through [`precision`]; the CLI's
//! `--precision` flag overrides them once at start-up.

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    /// Tolerance for metric identities (isometry, distance agreement).
    pub metric: f64,
    /// Half-width of the band around the class boundaries of `tr²`.
    pub classify_band: f64,
    /// Distance below which a crossing is considered to sit on a segment endpoint.
    pub endpoint: f64,
}

impl Precision {
    pub const DEFAULT: Precision = Precision {
        metric: 1e-10,
        classify_band: 1e-9,
        endpoint: 1e-12,
    };

    /// Parses `key=value` pairs separated by commas, e.g. `metric=1e-10,classify=1e-9`.
    /// A bare number sets the metric tolerance.
    pub fn parse_overrides(&self, spec: &str) -> Result<Precision> {
        let mut out = *self;
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = match part.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => ("metric", part),
            };
            let value: f64 = value
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad precision value `{value}`")))?;
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "precision `{key}` must lie in (0, 1), got {value}"
                )));
            }
            match key {
                "metric" => out.metric = value,
                "classify" | "classify_band" => out.classify_band = value,
                "endpoint" => out.endpoint = value,
                other => return Err(Error::InvalidInput(format!("unknown precision key `{other}`"))),
            }
        }
        Ok(out)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static GLOBAL: RwLock<Precision> = RwLock::new(Precision::DEFAULT);

pub fn precision() -> Precision {
    *GLOBAL.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_precision(p: Precision) {
    *GLOBAL.write().unwrap_or_else(|e| e.into_inner()) = p;
}
