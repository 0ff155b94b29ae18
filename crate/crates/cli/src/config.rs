//! Optional `key = value` configuration file.

use std::path::Path;

use bilap_core::SolverControl;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "BILAP_CONFIG";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub rtol: Option<f64>,
    pub t0: Option<f64>,
    pub n0: Option<f64>,
    pub n_max: Option<u32>,
    pub samples: Option<usize>,
    pub max_doublings: Option<usize>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn std::fmt::Display| format!("config line {}: bad value for {key}: {e}", i + 1);
            match key {
                "rtol" => s.rtol = Some(value.parse().map_err(|e| bad(&e))?),
                "T0" => s.t0 = Some(value.parse().map_err(|e| bad(&e))?),
                "N0" => s.n0 = Some(value.parse().map_err(|e| bad(&e))?),
                "n_max" => s.n_max = Some(value.parse().map_err(|e| bad(&e))?),
                "samples" => s.samples = Some(value.parse().map_err(|e| bad(&e))?),
                "max_doublings" => s.max_doublings = Some(value.parse().map_err(|e| bad(&e))?),
                other => return Err(format!("config line {}: unknown key {other:?}", i + 1)),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// Values in `over` win.
    pub fn overlay(self, over: &Settings) -> Settings {
        Settings {
            rtol: over.rtol.or(self.rtol),
            t0: over.t0.or(self.t0),
            n0: over.n0.or(self.n0),
            n_max: over.n_max.or(self.n_max),
            samples: over.samples.or(self.samples),
            max_doublings: over.max_doublings.or(self.max_doublings),
        }
    }

    pub fn control(&self) -> SolverControl {
        let d = SolverControl::default();
        SolverControl {
            rtol: self.rtol.unwrap_or(d.rtol),
            t0: self.t0.or(d.t0),
            n0: self.n0.unwrap_or(d.n0),
            n_max: self.n_max.unwrap_or(d.n_max),
            max_doublings: self.max_doublings.unwrap_or(d.max_doublings),
            ..d
        }
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(bilap_core::domain::DEFAULT_SAMPLES)
    }
}
