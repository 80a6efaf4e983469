use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log_model::ColumnMapping;
use crate::mining::ContextAttribute;
use crate::recency::DEFAULT_THRESHOLD;
use crate::segmentation::{DEFAULT_BASE_SLOT, MINUTES_PER_DAY};

pub const DEFAULT_MIN_SUPPORT: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format `{other}`")),
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

/// Tunables for an analysis run. Missing fields in a config file take their
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Base slot width in minutes for time segmentation.
    pub base_slot: u32,
    pub min_support: u64,
    /// Conflict percentage above which a pair counts as a behavior change.
    pub threshold: f64,
    pub attributes: Vec<ContextAttribute>,
    pub output_format: OutputFormat,
    pub columns: ColumnMapping,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            base_slot: DEFAULT_BASE_SLOT,
            min_support: DEFAULT_MIN_SUPPORT,
            threshold: DEFAULT_THRESHOLD,
            attributes: ContextAttribute::DEFAULT_ORDER.to_vec(),
            output_format: OutputFormat::Json,
            columns: ColumnMapping::default(),
        }
    }
}

impl AnalysisConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: AnalysisConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_slot == 0 || !MINUTES_PER_DAY.is_multiple_of(self.base_slot) {
            return Err(Error::InvalidSlot(self.base_slot));
        }
        if self.min_support < 1 {
            return Err(Error::InvalidConfig(
                "min_support must be at least 1".into(),
            ));
        }
        if !(0.0..=100.0).contains(&self.threshold) {
            return Err(Error::InvalidConfig(format!(
                "threshold {} outside [0, 100]",
                self.threshold
            )));
        }
        if self.attributes.is_empty() {
            return Err(Error::InvalidConfig("attribute list is empty".into()));
        }
        let mut seen = self.attributes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.attributes.len() {
            return Err(Error::InvalidConfig("attribute listed twice".into()));
        }
        Ok(())
    }
}
