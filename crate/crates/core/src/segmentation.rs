//! Behavior-oriented time segments.
//!
//! Each day of the week is cut into fixed base slots. A slot is labeled with
//! the dominant behavior of every record that ever fell into it (or as empty),
//! and maximal runs of equally labeled slots merge into one segment. The
//! resulting segments partition `[0, 1440)` minutes for every weekday.

use std::fmt;
use std::sync::Arc;

use chrono::{Datelike, NaiveDateTime, Timelike, Weekday};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::log_model::{BehaviorClass, CallRecord};
use crate::mining::{dominant_behavior, BehaviorDistribution, ContextAttribute, Contextual};

pub const MINUTES_PER_DAY: u32 = 1440;
pub const DEFAULT_BASE_SLOT: u32 = 60;

pub const WEEKDAYS: [Weekday; 7] = [
    Weekday::Mon,
    Weekday::Tue,
    Weekday::Wed,
    Weekday::Thu,
    Weekday::Fri,
    Weekday::Sat,
    Weekday::Sun,
];

pub fn weekday_name(day: Weekday) -> &'static str {
    match day {
        Weekday::Mon => "Monday",
        Weekday::Tue => "Tuesday",
        Weekday::Wed => "Wednesday",
        Weekday::Thu => "Thursday",
        Weekday::Fri => "Friday",
        Weekday::Sat => "Saturday",
        Weekday::Sun => "Sunday",
    }
}

fn serialize_weekday<S: Serializer>(day: &Weekday, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(weekday_name(*day))
}

/// Label of a base slot before merging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotLabel {
    Empty,
    Behavior(BehaviorClass),
}

impl fmt::Display for SlotLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotLabel::Empty => f.write_str("empty"),
            SlotLabel::Behavior(b) => b.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimeSegment {
    #[serde(serialize_with = "serialize_weekday")]
    pub day: Weekday,
    /// Minutes from midnight, inclusive.
    pub start: u32,
    /// Minutes from midnight, exclusive.
    pub end: u32,
    pub label: String,
    #[serde(skip)]
    pub slot_label: SlotLabel,
}

impl TimeSegment {
    fn new(day: Weekday, start: u32, end: u32, slot_label: SlotLabel) -> Self {
        TimeSegment {
            day,
            start,
            end,
            label: format!("{}[{}-{}]", weekday_name(day), hhmm(start), hhmm(end)),
            slot_label,
        }
    }

    pub fn contains(&self, day: Weekday, minute: u32) -> bool {
        self.day == day && self.start <= minute && minute < self.end
    }
}

fn hhmm(minutes: u32) -> String {
    format!("{:02}:{:02}", minutes / 60, minutes % 60)
}

fn minute_of_day(ts: &NaiveDateTime) -> u32 {
    ts.hour() * 60 + ts.minute()
}

/// Run-length merge of one day's slot labels into `(start, end, label)`
/// spans in minutes.
pub fn merge_slots(labels: &[SlotLabel], base_slot: u32) -> Vec<(u32, u32, SlotLabel)> {
    let mut spans: Vec<(u32, u32, SlotLabel)> = Vec::new();
    for (i, &label) in labels.iter().enumerate() {
        let start = i as u32 * base_slot;
        match spans.last_mut() {
            Some(last) if last.2 == label => last.1 = start + base_slot,
            _ => spans.push((start, start + base_slot, label)),
        }
    }
    spans
}

fn check_slot(base_slot: u32) -> Result<()> {
    if base_slot == 0 || !MINUTES_PER_DAY.is_multiple_of(base_slot) {
        return Err(Error::InvalidSlot(base_slot));
    }
    Ok(())
}

/// Segments for all seven weekdays, Monday first, each day ordered by start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    base_slot: u32,
    segments: Vec<TimeSegment>,
    labels: Vec<Arc<str>>,
}

impl Segmentation {
    pub fn segments(&self) -> &[TimeSegment] {
        &self.segments
    }

    pub fn base_slot(&self) -> u32 {
        self.base_slot
    }

    fn position(&self, timestamp: &NaiveDateTime) -> usize {
        let day = timestamp.weekday();
        let minute = minute_of_day(timestamp);
        let day_start = self
            .segments
            .partition_point(|s| s.day.num_days_from_monday() < day.num_days_from_monday());
        let day_end = self
            .segments
            .partition_point(|s| s.day.num_days_from_monday() <= day.num_days_from_monday());
        let day_segments = &self.segments[day_start..day_end];
        day_start + day_segments.partition_point(|s| s.end <= minute)
    }

    pub fn assign(&self, timestamp: &NaiveDateTime) -> &TimeSegment {
        &self.segments[self.position(timestamp)]
    }

    /// Attaches each record's segment label, sharing one allocation per label.
    pub fn label_records(&self, records: &[CallRecord]) -> Vec<LabeledRecord> {
        records
            .iter()
            .map(|r| LabeledRecord {
                segment: Arc::clone(&self.labels[self.position(&r.timestamp)]),
                record: r.clone(),
            })
            .collect()
    }
}

/// Cuts every weekday into `base_slot`-minute slots, labels each slot with
/// its dominant behavior over `records`, and merges equal adjacent labels.
pub fn build_segments(records: &[CallRecord], base_slot: u32) -> Result<Segmentation> {
    check_slot(base_slot)?;
    let slots_per_day = (MINUTES_PER_DAY / base_slot) as usize;

    let mut counts = vec![BehaviorDistribution::new(); 7 * slots_per_day];
    for r in records {
        let day = r.timestamp.weekday().num_days_from_monday() as usize;
        let slot = (minute_of_day(&r.timestamp) / base_slot) as usize;
        counts[day * slots_per_day + slot].record(r.behavior);
    }

    let mut segments = Vec::new();
    for (d, day) in WEEKDAYS.iter().enumerate() {
        let labels: Vec<SlotLabel> = counts[d * slots_per_day..(d + 1) * slots_per_day]
            .iter()
            .map(|dist| match dominant_behavior(dist) {
                Ok(b) => SlotLabel::Behavior(b),
                Err(_) => SlotLabel::Empty,
            })
            .collect();
        for (start, end, label) in merge_slots(&labels, base_slot) {
            segments.push(TimeSegment::new(*day, start, end, label));
        }
    }

    let labels = segments
        .iter()
        .map(|s| Arc::from(s.label.as_str()))
        .collect();
    Ok(Segmentation {
        base_slot,
        segments,
        labels,
    })
}

/// Finds the segment containing `timestamp`.
///
/// `segments` must partition every weekday; the result is then unique.
pub fn assign_segment<'a>(
    segments: &'a [TimeSegment],
    timestamp: &NaiveDateTime,
) -> Option<&'a TimeSegment> {
    let day = timestamp.weekday();
    let minute = minute_of_day(timestamp);
    segments.iter().find(|s| s.contains(day, minute))
}

/// A call record together with its time segment label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledRecord {
    pub record: CallRecord,
    pub segment: Arc<str>,
}

impl Contextual for LabeledRecord {
    fn context_value(&self, attribute: ContextAttribute) -> &str {
        match attribute {
            ContextAttribute::TimeSegment => &self.segment,
            ContextAttribute::DayOfWeek => weekday_name(self.record.timestamp.weekday()),
            ContextAttribute::Location => &self.record.location,
            ContextAttribute::Relationship => &self.record.relationship,
        }
    }

    fn behavior(&self) -> BehaviorClass {
        self.record.behavior
    }
}
