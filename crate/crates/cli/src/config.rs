use std::path::Path;

use serde::{Deserialize, Serialize};
use unicircle::certify::CERTIFICATE_SAMPLES;
use unicircle::{DEFAULT_PRECISION, MIN_PRECISION};

use crate::CliError;

pub const PRECISION_ENV: &str = "UNICIRCLE_PRECISION_BITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    /// Tolerances are `10^-tol_exponent`.
    pub tol_exponent: i32,
    pub samples: usize,
    pub parallelism: usize,
    pub output_format: OutputFormat,
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub precision_bits: Option<u32>,
    pub tol_exponent: Option<i32>,
    pub samples: Option<usize>,
    pub parallelism: Option<usize>,
    pub output_format: Option<OutputFormat>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn from_env_value(value: Option<String>) -> Result<Self, CliError> {
        let precision_bits = match value {
            None => None,
            Some(v) => Some(v.trim().parse().map_err(|_| {
                CliError::Usage(format!("{PRECISION_ENV} must be an integer, got {v:?}"))
            })?),
        };
        Ok(PartialConfig {
            precision_bits,
            ..Default::default()
        })
    }

    /// Fields of `self` win over `below`.
    pub fn over(self, below: PartialConfig) -> PartialConfig {
        PartialConfig {
            precision_bits: self.precision_bits.or(below.precision_bits),
            tol_exponent: self.tol_exponent.or(below.tol_exponent),
            samples: self.samples.or(below.samples),
            parallelism: self.parallelism.or(below.parallelism),
            output_format: self.output_format.or(below.output_format),
        }
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let cfg = RunConfig {
            precision_bits: self.precision_bits.unwrap_or(DEFAULT_PRECISION),
            tol_exponent: self.tol_exponent.unwrap_or(20),
            samples: self.samples.unwrap_or(CERTIFICATE_SAMPLES),
            parallelism: self.parallelism.unwrap_or_else(default_parallelism),
            output_format: self.output_format.unwrap_or(OutputFormat::Json),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    pub fn tol(&self) -> f64 {
        10f64.powi(-self.tol_exponent)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < MIN_PRECISION {
            return Err(CliError::Usage(format!(
                "precision_bits must be at least {MIN_PRECISION}, got {}",
                self.precision_bits
            )));
        }
        if self.samples < 64 {
            return Err(CliError::Usage(format!("samples must be at least 64, got {}", self.samples)));
        }
        if self.parallelism == 0 {
            return Err(CliError::Usage("parallelism must be at least 1".into()));
        }
        if self.tol_exponent <= 0 || self.tol_exponent > 300 {
            return Err(CliError::Usage(format!(
                "tol_exponent must be in 1..=300, got {}",
                self.tol_exponent
            )));
        }
        Ok(())
    }
}
