//! JSON and CSV renderings of score series and analysis results.
//!
//! Undefined scores are written as `null` in JSON and as an empty field in
//! CSV.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::recency::{ConflictScore, RecencyResult};
use crate::segmentation::TimeSegment;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub pair: [u32; 2],
    pub shared: usize,
    pub conflicts: usize,
    pub score: Option<f64>,
}

impl From<&ConflictScore> for SeriesRow {
    fn from(s: &ConflictScore) -> Self {
        SeriesRow {
            pair: [s.newer, s.older],
            shared: s.shared,
            conflicts: s.conflicts,
            score: s.score,
        }
    }
}

/// Associations seen in only one week of a pair; they do not enter the score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDiagnostics {
    pub pair: [u32; 2],
    pub newer_only: usize,
    pub older_only: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub weeks: u32,
    pub series: Vec<SeriesRow>,
    pub boundary: Option<[u32; 2]>,
    pub recent_weeks: u32,
    pub recent_records: usize,
    pub diagnostics: Vec<PairDiagnostics>,
}

impl Report {
    pub fn new<R>(result: &RecencyResult<R>) -> Self {
        Report {
            weeks: result.total_weeks,
            series: result.series.iter().map(SeriesRow::from).collect(),
            boundary: result.boundary.map(|(i, j)| [i, j]),
            recent_weeks: result.recent_weeks,
            recent_records: result.recent_records.len(),
            diagnostics: result
                .series
                .iter()
                .map(|s| PairDiagnostics {
                    pair: [s.newer, s.older],
                    newer_only: s.newer_only,
                    older_only: s.older_only,
                })
                .collect(),
        }
    }
}

fn score_field(score: Option<f64>) -> String {
    score.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_report_json<W: Write>(mut out: W, report: &Report) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

/// One row per pair, with the boundary pair flagged and the window length
/// repeated on each row.
pub fn write_report_csv<W: Write>(out: W, report: &Report) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "newer",
        "older",
        "shared",
        "conflicts",
        "score",
        "boundary",
        "recent_weeks",
    ])?;
    for row in &report.series {
        let is_boundary = report.boundary == Some(row.pair);
        w.write_record([
            row.pair[0].to_string(),
            row.pair[1].to_string(),
            row.shared.to_string(),
            row.conflicts.to_string(),
            score_field(row.score),
            u8::from(is_boundary).to_string(),
            report.recent_weeks.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series_json<W: Write>(mut out: W, series: &[ConflictScore]) -> Result<()> {
    let rows: Vec<SeriesRow> = series.iter().map(SeriesRow::from).collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_series_csv<W: Write>(out: W, series: &[ConflictScore]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["newer", "older", "shared", "conflicts", "score"])?;
    for s in series {
        w.write_record([
            s.newer.to_string(),
            s.older.to_string(),
            s.shared.to_string(),
            s.conflicts.to_string(),
            score_field(s.score),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_segments_json<W: Write>(mut out: W, segments: &[TimeSegment]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, segments)?;
    writeln!(out)?;
    Ok(())
}
