//! Week-wise splitting, adjacent-week conflict scoring and detection of the
//! boundary that delimits the recent part of a log.
//!
//! Weeks are indexed from the oldest (`1`) to the most recent (`n`). Scanning
//! runs from the pair `(n, n-1)` backwards and stops at the first pair whose
//! conflict score is significant; the weeks newer than that point form the
//! recent window.

use chrono::{Duration, NaiveDateTime};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::log_model::CallRecord;
use crate::mining::{
    context_precedence, dominant_behavior, generate_associations, AssociationTable,
    ContextAttribute, Contextual,
};
use crate::segmentation::LabeledRecord;

pub const DEFAULT_THRESHOLD: f64 = 20.0;

pub trait Timestamped {
    fn timestamp(&self) -> NaiveDateTime;
}

impl Timestamped for CallRecord {
    fn timestamp(&self) -> NaiveDateTime {
        self.timestamp
    }
}

impl Timestamped for LabeledRecord {
    fn timestamp(&self) -> NaiveDateTime {
        self.record.timestamp
    }
}

/// Records falling in one 7-day window `[start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeekDataset<R> {
    pub index: u32,
    pub start: NaiveDateTime,
    pub end: NaiveDateTime,
    /// Set on the oldest week when the log begins after the window start.
    pub partial: bool,
    pub records: Vec<R>,
}

impl<R> WeekDataset<R> {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Splits a log into 7-day windows counted back from its newest record.
///
/// The newest window ends one minute after the last record. Windows are
/// returned oldest first, so `weeks[i].index == i + 1`. Windows without
/// records are kept.
pub fn split_by_week<R: Timestamped>(records: Vec<R>) -> Result<Vec<WeekDataset<R>>> {
    let (Some(first), Some(last)) = (
        records.iter().map(Timestamped::timestamp).min(),
        records.iter().map(Timestamped::timestamp).max(),
    ) else {
        return Err(Error::EmptyLog);
    };

    let week = Duration::days(7);
    let end = last + Duration::minutes(1);
    let span = (end - first).num_minutes();
    let week_minutes = week.num_minutes();
    let n = ((span + week_minutes - 1) / week_minutes) as u32;

    let mut weeks: Vec<WeekDataset<R>> = (1..=n)
        .map(|index| {
            let start = end - week * (n - index + 1) as i32;
            WeekDataset {
                index,
                start,
                end: start + week,
                partial: false,
                records: Vec::new(),
            }
        })
        .collect();
    weeks[0].partial = weeks[0].start < first;

    for r in records {
        let back = ((end - r.timestamp()).num_minutes() - 1) / week_minutes;
        let pos = n as usize - 1 - back as usize;
        weeks[pos].records.push(r);
    }
    Ok(weeks)
}

/// Conflict between the dominant behaviors of two adjacent weeks.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictScore {
    pub newer: u32,
    pub older: u32,
    /// Associations present in both weeks.
    pub shared: usize,
    /// Shared associations whose dominant behavior differs.
    pub conflicts: usize,
    /// `100 * conflicts / shared`, or `None` when nothing is shared.
    pub score: Option<f64>,
    pub newer_only: usize,
    pub older_only: usize,
}

impl ConflictScore {
    pub fn pair(&self) -> (u32, u32) {
        (self.newer, self.older)
    }
}

/// Mines one week with its own attribute precedence. Empty weeks yield an
/// empty table.
pub fn mine_week<R: Contextual>(
    records: &[R],
    attributes: &[ContextAttribute],
    min_support: u64,
) -> Result<AssociationTable> {
    if records.is_empty() {
        return Ok(AssociationTable::new());
    }
    let precedence = context_precedence(records, attributes)?;
    generate_associations(records, &precedence, min_support)
}

fn compare_tables(
    newer: u32,
    older: u32,
    a: &AssociationTable,
    b: &AssociationTable,
) -> Result<ConflictScore> {
    let mut shared = 0;
    let mut conflicts = 0;
    for (assoc, dist_a) in a {
        if let Some(dist_b) = b.get(assoc) {
            shared += 1;
            if dominant_behavior(dist_a)? != dominant_behavior(dist_b)? {
                conflicts += 1;
            }
        }
    }
    let score = (shared > 0).then(|| 100.0 * conflicts as f64 / shared as f64);
    Ok(ConflictScore {
        newer,
        older,
        shared,
        conflicts,
        score,
        newer_only: a.len() - shared,
        older_only: b.len() - shared,
    })
}

/// Scores two weeks against each other. Each week is mined independently
/// and only associations found in both are compared.
pub fn conflict_score<R: Contextual>(
    newer: &WeekDataset<R>,
    older: &WeekDataset<R>,
    attributes: &[ContextAttribute],
    min_support: u64,
) -> Result<ConflictScore> {
    let a = mine_week(&newer.records, attributes, min_support)?;
    let b = mine_week(&older.records, attributes, min_support)?;
    compare_tables(newer.index, older.index, &a, &b)
}

/// Scores every adjacent pair, most recent pair first.
pub fn score_series<R: Contextual + Sync>(
    weeks: &[WeekDataset<R>],
    attributes: &[ContextAttribute],
    min_support: u64,
) -> Result<Vec<ConflictScore>> {
    if weeks.len() < 2 {
        return Err(Error::InsufficientWeeks(weeks.len()));
    }
    let tables = weeks
        .par_iter()
        .map(|w| mine_week(&w.records, attributes, min_support))
        .collect::<Result<Vec<_>>>()?;

    (1..weeks.len())
        .rev()
        .map(|i| {
            compare_tables(
                weeks[i].index,
                weeks[i - 1].index,
                &tables[i],
                &tables[i - 1],
            )
        })
        .collect()
}

/// First pair, scanning from the most recent, whose score is undefined or
/// strictly above `threshold` percent.
pub fn detect_boundary(series: &[ConflictScore], threshold: f64) -> Option<(u32, u32)> {
    series
        .iter()
        .find(|s| s.score.is_none_or(|v| v > threshold))
        .map(ConflictScore::pair)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecencyResult<R> {
    pub total_weeks: u32,
    pub series: Vec<ConflictScore>,
    pub boundary: Option<(u32, u32)>,
    pub recent_weeks: u32,
    /// Records of the recent window in timestamp order.
    pub recent_records: Vec<R>,
}

/// Collects the weeks on the recent side of `boundary`. With no boundary the
/// whole log is recent.
pub fn aggregate_recent<R: Clone>(
    weeks: &[WeekDataset<R>],
    series: Vec<ConflictScore>,
    boundary: Option<(u32, u32)>,
) -> Result<RecencyResult<R>> {
    let n = weeks.len() as u32;
    let oldest_recent = match boundary {
        None => 1,
        Some((i, j)) => {
            let present = |idx: u32| weeks.iter().any(|w| w.index == idx);
            if i == 0 || j + 1 != i || !present(i) || !present(j) {
                return Err(Error::BoundaryMismatch(i, j));
            }
            i
        }
    };

    let recent_records = weeks
        .iter()
        .filter(|w| w.index >= oldest_recent)
        .flat_map(|w| w.records.iter().cloned())
        .collect();
    Ok(RecencyResult {
        total_weeks: n,
        series,
        boundary,
        recent_weeks: n + 1 - oldest_recent,
        recent_records,
    })
}
