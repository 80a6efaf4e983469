//! Call log records and CSV ingestion.
//!
//! A log row carries seven fields: date, time, call type, duration, location,
//! relationship and correspondent id. Incoming calls are split into
//! [`BehaviorClass::Accept`] and [`BehaviorClass::Reject`] by their duration;
//! missed and outgoing calls map to their own class.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Category used when a location or relationship cell is blank.
pub const UNKNOWN_CATEGORY: &str = "unknown";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CallType {
    Incoming,
    Missed,
    Outgoing,
}

impl CallType {
    pub fn as_str(self) -> &'static str {
        match self {
            CallType::Incoming => "incoming",
            CallType::Missed => "missed",
            CallType::Outgoing => "outgoing",
        }
    }
}

impl FromStr for CallType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "incoming" => Ok(CallType::Incoming),
            "missed" => Ok(CallType::Missed),
            "outgoing" => Ok(CallType::Outgoing),
            other => Err(format!("unknown call type `{other}`")),
        }
    }
}

impl fmt::Display for CallType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the user responded to a call.
///
/// The declaration order `Accept < Reject < Missed < Outgoing` is the tie-break
/// order used wherever two classes compare equal on count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BehaviorClass {
    Accept,
    Reject,
    Missed,
    Outgoing,
}

impl BehaviorClass {
    pub const ALL: [BehaviorClass; 4] = [
        BehaviorClass::Accept,
        BehaviorClass::Reject,
        BehaviorClass::Missed,
        BehaviorClass::Outgoing,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BehaviorClass::Accept => "accept",
            BehaviorClass::Reject => "reject",
            BehaviorClass::Missed => "missed",
            BehaviorClass::Outgoing => "outgoing",
        }
    }
}

impl fmt::Display for BehaviorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Maps a call type and duration to the user's behavior.
///
/// Only incoming calls look at the duration: a connected call (duration > 0)
/// was accepted, a zero-length one was rejected.
pub fn derive_behavior(call_type: CallType, duration: u32) -> BehaviorClass {
    match call_type {
        CallType::Incoming if duration > 0 => BehaviorClass::Accept,
        CallType::Incoming => BehaviorClass::Reject,
        CallType::Missed => BehaviorClass::Missed,
        CallType::Outgoing => BehaviorClass::Outgoing,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallRecord {
    pub timestamp: NaiveDateTime,
    pub call_type: CallType,
    /// Seconds.
    pub duration: u32,
    pub location: String,
    pub relationship: String,
    pub correspondent_id: String,
    pub behavior: BehaviorClass,
}

impl CallRecord {
    /// Builds a record, truncating the timestamp to the minute and deriving
    /// the behavior class.
    pub fn new(
        timestamp: NaiveDateTime,
        call_type: CallType,
        duration: u32,
        location: impl Into<String>,
        relationship: impl Into<String>,
        correspondent_id: impl Into<String>,
    ) -> Self {
        let timestamp = timestamp
            .with_second(0)
            .and_then(|t| t.with_nanosecond(0))
            .unwrap_or(timestamp);
        CallRecord {
            timestamp,
            call_type,
            duration,
            location: normalize_category(location.into()),
            relationship: normalize_category(relationship.into()),
            correspondent_id: correspondent_id.into(),
            behavior: derive_behavior(call_type, duration),
        }
    }
}

fn normalize_category(value: String) -> String {
    let trimmed = value.trim();
    if trimmed.is_empty() {
        UNKNOWN_CATEGORY.to_string()
    } else if trimmed.len() == value.len() {
        value
    } else {
        trimmed.to_string()
    }
}

/// Header names for each of the seven log fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnMapping {
    pub date: String,
    pub time: String,
    pub call_type: String,
    pub duration: String,
    pub location: String,
    pub relationship: String,
    pub call_id: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            date: "date".into(),
            time: "time".into(),
            call_type: "call_type".into(),
            duration: "duration".into(),
            location: "location".into(),
            relationship: "relationship".into(),
            call_id: "call_id".into(),
        }
    }
}

/// A row that could not be turned into a [`CallRecord`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedRow {
    /// 1-based line number in the source, the header being line 1.
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for MalformedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedLog {
    /// Ascending by timestamp; equal timestamps keep input order.
    pub records: Vec<CallRecord>,
    pub malformed: Vec<MalformedRow>,
}

struct ColumnIndex {
    date: usize,
    time: usize,
    call_type: usize,
    duration: usize,
    location: usize,
    relationship: usize,
    call_id: usize,
}

impl ColumnIndex {
    fn resolve(header: &csv::StringRecord, mapping: &ColumnMapping) -> Result<Self> {
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))
        };
        Ok(ColumnIndex {
            date: find(&mapping.date)?,
            time: find(&mapping.time)?,
            call_type: find(&mapping.call_type)?,
            duration: find(&mapping.duration)?,
            location: find(&mapping.location)?,
            relationship: find(&mapping.relationship)?,
            call_id: find(&mapping.call_id)?,
        })
    }
}

/// Reads a CSV call log.
///
/// Rows that fail to parse are collected in [`ParsedLog::malformed`] rather
/// than aborting the read. A log without a single valid row is an error.
pub fn parse_log<R: Read>(source: R, mapping: &ColumnMapping) -> Result<ParsedLog> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let columns = ColumnIndex::resolve(reader.headers()?, mapping)?;

    let mut parsed = ParsedLog::default();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row, &columns) {
            Ok(record) => parsed.records.push(record),
            Err(reason) => parsed.malformed.push(MalformedRow { line, reason }),
        }
    }

    if parsed.records.is_empty() {
        return Err(Error::EmptyLog);
    }
    parsed.records.sort_by_key(|r| r.timestamp);
    Ok(parsed)
}

fn parse_row(
    row: &csv::StringRecord,
    columns: &ColumnIndex,
) -> std::result::Result<CallRecord, String> {
    let field = |idx: usize, name: &str| {
        row.get(idx)
            .map(str::trim)
            .ok_or_else(|| format!("missing `{name}` field"))
    };

    let date_str = field(columns.date, "date")?;
    let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d")
        .map_err(|e| format!("bad date `{date_str}`: {e}"))?;
    let time_str = field(columns.time, "time")?;
    let time = NaiveTime::parse_from_str(time_str, "%H:%M")
        .map_err(|e| format!("bad time `{time_str}`: {e}"))?;
    let call_type: CallType = field(columns.call_type, "call_type")?.parse()?;

    let duration_str = field(columns.duration, "duration")?;
    let duration: i64 = duration_str
        .parse()
        .map_err(|_| format!("bad duration `{duration_str}`"))?;
    if duration < 0 {
        return Err(format!("negative duration {duration}"));
    }
    let duration =
        u32::try_from(duration).map_err(|_| format!("duration {duration} out of range"))?;

    Ok(CallRecord::new(
        date.and_time(time),
        call_type,
        duration,
        field(columns.location, "location")?,
        field(columns.relationship, "relationship")?,
        field(columns.call_id, "call_id")?,
    ))
}

/// Writes records with the default column names, in the format
/// [`parse_log`] reads back.
pub fn write_log<W: Write>(sink: W, records: &[CallRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    let mapping = ColumnMapping::default();
    writer.write_record([
        &mapping.date,
        &mapping.time,
        &mapping.call_type,
        &mapping.duration,
        &mapping.location,
        &mapping.relationship,
        &mapping.call_id,
    ])?;
    for r in records {
        writer.write_record([
            r.timestamp.format("%Y-%m-%d").to_string(),
            r.timestamp.format("%H:%M").to_string(),
            r.call_type.as_str().to_string(),
            r.duration.to_string(),
            r.location.clone(),
            r.relationship.clone(),
            r.correspondent_id.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
