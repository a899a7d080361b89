use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::estimator::{KeyRateOptions, DEFAULT_F_EC};

/// Inclusive arithmetic range `start, start+step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let r = Self { start, stop, step };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(Error::Config(format!("non-finite range {self:?}")));
        }
        if self.step <= 0.0 {
            return Err(Error::Config(format!("range step must be > 0, got {}", self.step)));
        }
        if self.stop < self.start {
            return Err(Error::Config(format!("empty range: stop {} < start {}", self.stop, self.start)));
        }
        Ok(())
    }

    /// Values are computed as `start + i·step` so no error accumulates.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// `lg ε` linear in the system frequency through two anchor points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsFrequencyMap {
    pub f_low_ghz: f64,
    pub eps_low: f64,
    pub f_high_ghz: f64,
    pub eps_high: f64,
}

impl Default for EpsFrequencyMap {
    fn default() -> Self {
        Self { f_low_ghz: 0.1, eps_low: 1e-9, f_high_ghz: 4.0, eps_high: 1e-6 }
    }
}

impl EpsFrequencyMap {
    /// Same ε at every frequency.
    pub fn constant(eps: f64) -> Self {
        Self { f_low_ghz: 0.1, eps_low: eps, f_high_ghz: 4.0, eps_high: eps }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_high_ghz > self.f_low_ghz) {
            return Err(Error::Config("eps map needs f_high_ghz > f_low_ghz".into()));
        }
        for e in [self.eps_low, self.eps_high] {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::Config(format!("eps map anchor {e} must lie in (0, 1]")));
            }
        }
        Ok(())
    }

    pub fn eps_at(&self, f_ghz: f64) -> f64 {
        let (lo, hi) = (self.eps_low.log10(), self.eps_high.log10());
        let slope = (hi - lo) / (self.f_high_ghz - self.f_low_ghz);
        10f64.powf(lo + slope * (f_ghz - self.f_low_ghz)).min(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    #[default]
    Loss,
    Frequency,
}

impl FromStr for SweepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loss" => Ok(SweepKind::Loss),
            "frequency" => Ok(SweepKind::Frequency),
            other => Err(Error::Config(format!("unknown sweep `{other}` (loss|frequency)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json-lines", alias = "jsonl")]
    JsonLines,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            other => Err(Error::Config(format!("unknown format `{other}` (csv|json-lines)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimationConfig {
    #[serde(default = "default_f_ec")]
    pub f_ec: f64,
    /// Multiply the rate by `p_ZA · p_ZB`.
    #[serde(default)]
    pub sifting: bool,
}

fn default_f_ec() -> f64 {
    DEFAULT_F_EC
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self { f_ec: DEFAULT_F_EC, sifting: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    /// Uniform side-channel weights, one curve each.
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    /// Uniform modulation deviations (radians), one curve each.
    #[serde(default = "default_delta")]
    pub delta: Vec<f64>,
}

fn default_eps() -> Vec<f64> {
    vec![0.0, 1e-8, 1e-7, 1e-6]
}

fn default_delta() -> Vec<f64> {
    vec![0.0]
}

impl Default for ScanParams {
    fn default() -> Self {
        Self { eps: default_eps(), delta: default_delta() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyConfig {
    #[serde(flatten)]
    pub range: RangeSpec,
    /// Fixed total loss for the scan. Required.
    pub loss_db: f64,
    #[serde(default)]
    pub eps_map: EpsFrequencyMap,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "ChannelParams::reference")]
    pub channel: ChannelParams,
    #[serde(default)]
    pub estimation: EstimationConfig,
    #[serde(default)]
    pub scan: ScanParams,
    #[serde(default = "default_loss_range")]
    pub loss: RangeSpec,
    pub frequency: Option<FrequencyConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_loss_range() -> RangeSpec {
    RangeSpec { start: 0.0, stop: 40.0, step: 0.5 }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            channel: ChannelParams::reference(),
            estimation: EstimationConfig::default(),
            scan: ScanParams::default(),
            loss: default_loss_range(),
            frequency: None,
            output: OutputConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn key_rate_options(&self) -> KeyRateOptions {
        KeyRateOptions {
            f_ec: self.estimation.f_ec,
            sifting_prefactor: self.estimation.sifting.then_some(self.channel.p_za * self.channel.p_zb),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.loss.validate()?;
        if self.loss.start < 0.0 {
            return Err(Error::Config("loss range must start at ≥ 0 dB".into()));
        }
        if self.scan.eps.is_empty() || self.scan.delta.is_empty() {
            return Err(Error::Config("scan.eps and scan.delta must be non-empty".into()));
        }
        if let Some(e) = self.scan.eps.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::Config(format!("eps value {e} outside [0, 1]")));
        }
        if let Some(f) = &self.frequency {
            f.range.validate()?;
            f.eps_map.validate()?;
            if f.range.start <= 0.0 {
                return Err(Error::Config("frequencies must be positive".into()));
            }
            if !(f.loss_db >= 0.0) {
                return Err(Error::Config("frequency.loss_db must be ≥ 0".into()));
            }
        }
        if !(self.estimation.f_ec >= 1.0) {
            return Err(Error::Config("estimation.f_ec must be ≥ 1".into()));
        }
        Ok(())
    }
}
