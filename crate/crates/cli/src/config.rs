//! Run configuration: one JSON document, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use bec_impurity::rates::{BoxOracleConfig, INCOMMENSURATE_DIRECTION};
use bec_impurity::SystemParams;
use serde::{Deserialize, Serialize};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Physical inputs. Defaults are the reduced units `m = c = n = 1` with a
/// unit impurity mass, `g = 1` and `a = 0.01`. An explicit `null` unsets `g`
/// or `a`, which is then derived from the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub m: f64,
    #[serde(rename = "M")]
    pub impurity_mass: f64,
    pub n: f64,
    #[serde(rename = "U0")]
    pub u0: f64,
    pub g: Option<f64>,
    pub a: Option<f64>,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { m: 1.0, impurity_mass: 1.0, n: 1.0, u0: 1.0, g: Some(1.0), a: Some(0.01) }
    }
}

impl ParamsConfig {
    pub fn build(&self) -> bec_impurity::Result<SystemParams> {
        let mut p = SystemParams::new(self.m, self.impurity_mass, self.n, self.u0)?;
        if let Some(g) = self.g {
            p = p.with_coupling(g)?;
        }
        if let Some(a) = self.a {
            p = p.with_scattering_length(a)?;
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridConfig {
    pub const fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count, spacing: Spacing::Linear }
    }

    /// Parses `start:stop:count` or `start:stop:count:log`.
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let spacing = match parts.get(3).copied() {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(other) => bail!("unknown grid spacing `{other}` (expected `linear` or `log`)"),
        };
        ensure!(parts.len() == 3 || parts.len() == 4, "grid must look like start:stop:count[:log], got `{s}`");
        let num = |t: &str, what: &str| t.trim().parse::<f64>().with_context(|| format!("grid {what} `{t}`"));
        Ok(Self {
            start: num(parts[0], "start")?,
            stop: num(parts[1], "stop")?,
            count: parts[2].trim().parse().with_context(|| format!("grid count `{}`", parts[2]))?,
            spacing,
        })
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(self.start.is_finite() && self.stop.is_finite(), "grid bounds must be finite");
        if self.count >= 2 {
            ensure!(self.stop > self.start, "grid must be strictly increasing (start {} >= stop {})", self.start, self.stop);
        }
        if self.spacing == Spacing::Log && self.count > 0 {
            ensure!(self.start > 0.0, "log grid needs a positive start");
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        match n {
            0 => Vec::new(),
            1 => vec![self.start],
            _ => (0..n)
                .map(|k| {
                    if k == n - 1 {
                        return self.stop;
                    }
                    let f = k as f64 / (n - 1) as f64;
                    match self.spacing {
                        Spacing::Linear => self.start + f * (self.stop - self.start),
                        Spacing::Log => self.start * (self.stop / self.start).powf(f),
                    }
                })
                .collect(),
        }
    }
}

/// Finite-box oracle settings. `schedule` lists `(L, eta)` pairs; when empty
/// the single pair `(L, eta)` is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoxConfig {
    #[serde(rename = "L")]
    pub box_length: f64,
    pub eta: f64,
    pub pcut: f64,
    pub q: f64,
    pub schedule: Vec<(f64, f64)>,
    pub direction: [f64; 3],
    pub max_points: u64,
}

impl Default for BoxConfig {
    fn default() -> Self {
        Self {
            box_length: 120.0,
            eta: 0.025,
            pcut: 3.0,
            q: 2.0,
            schedule: vec![(30.0, 0.1), (60.0, 0.05), (120.0, 0.025)],
            direction: INCOMMENSURATE_DIRECTION,
            max_points: 50_000_000,
        }
    }
}

impl BoxConfig {
    pub fn steps(&self) -> Vec<BoxOracleConfig> {
        let pairs = if self.schedule.is_empty() { vec![(self.box_length, self.eta)] } else { self.schedule.clone() };
        pairs
            .into_iter()
            .map(|(l, eta)| BoxOracleConfig {
                max_points: self.max_points,
                direction: self.direction,
                ..BoxOracleConfig::new(l, eta, self.pcut)
            })
            .collect()
    }
}

/// Everything a command needs. Missing fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: ParamsConfig,
    /// Sweep grid; each command has its own default when unset.
    pub grid: Option<GridConfig>,
    /// Relative tolerance for adaptive quadrature.
    pub tol: f64,
    /// Momentum cutoff for the cutoff-plus-counterterm energy shift.
    pub cutoff: f64,
    #[serde(rename = "box")]
    pub box_oracle: BoxConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ParamsConfig::default(),
            grid: None,
            tol: 1e-12,
            cutoff: 2e4,
            box_oracle: BoxConfig::default(),
            output: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(self.tol.is_finite() && self.tol > 0.0, "tol must be positive, got {}", self.tol);
        ensure!(self.cutoff.is_finite() && self.cutoff > 0.0, "cutoff must be positive, got {}", self.cutoff);
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        let b = &self.box_oracle;
        for (l, eta) in b.steps().iter().map(|s| (s.box_length, s.broadening)) {
            ensure!(l.is_finite() && l > 0.0, "box L must be positive, got {l}");
            ensure!(eta.is_finite() && eta > 0.0, "box eta must be positive, got {eta}");
        }
        ensure!(b.pcut.is_finite() && b.pcut > 0.0, "box pcut must be positive, got {}", b.pcut);
        self.params.build()?;
        Ok(())
    }

    pub fn grid_or(&self, default: GridConfig) -> Vec<f64> {
        self.grid.unwrap_or(default).points()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = GridConfig::parse("0:2:3").unwrap();
        assert_eq!(g.points(), [0.0, 1.0, 2.0]);
        let g = GridConfig::parse("0.01:100:5:log").unwrap();
        let pts = g.points();
        assert_eq!(pts[0], 0.01);
        assert_eq!(pts[4], 100.0);
        assert!((pts[2] - 1.0).abs() < 1e-15);
        assert!(GridConfig::parse("1:2").is_err());
        assert!(GridConfig::parse("1:2:x").is_err());
        assert!(GridConfig::parse("2:1:3").unwrap().validate().is_err());
        assert!(GridConfig::parse("0:1:0").unwrap().points().is_empty());
    }

    #[test]
    fn partial_config_keeps_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"params": {"M": 2, "g": 0.5}, "tol": 1e-9}"#).unwrap();
        assert_eq!(c.tol, 1e-9);
        assert_eq!(c.params.impurity_mass, 2.0);
        assert_eq!(c.params.a, Some(0.01));
        let c: RunConfig = serde_json::from_str(r#"{"params": {"a": null}}"#).unwrap();
        assert_eq!(c.params.a, None);
        assert_eq!(c.cutoff, RunConfig::default().cutoff);
        assert!(serde_json::from_str::<RunConfig>(r#"{"tolerance": 1}"#).is_err());
    }

    #[test]
    fn negative_tolerance_is_rejected() {
        let c = RunConfig { tol: -1e-8, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }
}
