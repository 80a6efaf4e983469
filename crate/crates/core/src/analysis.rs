//! End-to-end pipeline: segment, split, score, detect, aggregate.

use crate::config::AnalysisConfig;
use crate::error::Result;
use crate::log_model::CallRecord;
use crate::recency::{
    aggregate_recent, detect_boundary, score_series, split_by_week, ConflictScore, RecencyResult,
    WeekDataset,
};
use crate::segmentation::{build_segments, LabeledRecord, Segmentation};

#[derive(Debug, Clone)]
pub struct Scored {
    pub segmentation: Segmentation,
    pub weeks: Vec<WeekDataset<LabeledRecord>>,
    pub series: Vec<ConflictScore>,
}

/// Runs everything up to and including the conflict-score series.
pub fn score_log(records: &[CallRecord], config: &AnalysisConfig) -> Result<Scored> {
    config.validate()?;
    let segmentation = build_segments(records, config.base_slot)?;
    let weeks = split_by_week(segmentation.label_records(records))?;
    let series = score_series(&weeks, &config.attributes, config.min_support)?;
    Ok(Scored {
        segmentation,
        weeks,
        series,
    })
}

/// Finds the recent window of `records` (ascending by timestamp).
pub fn analyze(
    records: &[CallRecord],
    config: &AnalysisConfig,
) -> Result<RecencyResult<LabeledRecord>> {
    let Scored { weeks, series, .. } = score_log(records, config)?;
    let boundary = detect_boundary(&series, config.threshold);
    aggregate_recent(&weeks, series, boundary)
}
