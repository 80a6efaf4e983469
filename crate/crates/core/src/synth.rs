//! Synthetic call logs with a planted behavior change.
//!
//! Every template describes a weekly recurring context (a weekday time
//! window, a location and a relationship) together with the behavior the
//! user shows there before and after the drift week. Weeks `1..=drift_week`
//! follow the `before` profile, later weeks the `after` profile.
//!
//! A template window must fit inside one segmentation base slot. Wider
//! windows can be cut into several time segments once the profile changes,
//! and each piece then carries only part of the template's support.

use chrono::{Duration, NaiveDate, NaiveDateTime, Weekday};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::log_model::{BehaviorClass, CallRecord, CallType};
use crate::segmentation::{DEFAULT_BASE_SLOT, MINUTES_PER_DAY, WEEKDAYS};

const MINUTES_PER_WEEK: i64 = 7 * MINUTES_PER_DAY as i64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorTemplate {
    pub day: Weekday,
    /// Minutes from midnight, inclusive.
    pub start: u32,
    /// Minutes from midnight, exclusive.
    pub end: u32,
    pub location: String,
    pub relationship: String,
    pub before: BehaviorClass,
    pub after: BehaviorClass,
}

impl BehaviorTemplate {
    fn week_span(&self) -> (i64, i64) {
        let day = self.day.num_days_from_monday() as i64 * MINUTES_PER_DAY as i64;
        (day + self.start as i64, day + self.end as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    pub total_weeks: u32,
    /// Last week, counted from the oldest, that follows the `before` profile.
    pub drift_week: u32,
    pub records_per_week: u32,
    pub templates: Vec<BehaviorTemplate>,
    /// Probability of replacing a record's behavior with a uniformly chosen
    /// different class.
    pub noise: f64,
    pub seed: u64,
    /// Support the spec must be able to satisfy per template and week.
    pub min_support: u64,
    /// Base slot width the log is meant to be segmented with.
    pub base_slot: u32,
}

/// Four weekly one-hour routines whose behavior flips on every one of them.
pub fn default_templates() -> Vec<BehaviorTemplate> {
    use BehaviorClass::*;
    let t =
        |day, start_h: u32, location: &str, relationship: &str, before, after| BehaviorTemplate {
            day,
            start: start_h * 60,
            end: (start_h + 1) * 60,
            location: location.into(),
            relationship: relationship.into(),
            before,
            after,
        };
    vec![
        t(Weekday::Mon, 10, "office", "colleague", Reject, Accept),
        t(Weekday::Wed, 18, "home", "family", Accept, Reject),
        t(Weekday::Fri, 8, "car", "friend", Missed, Accept),
        t(Weekday::Sun, 14, "outdoor", "other", Outgoing, Missed),
    ]
}

/// Draws `count` one-hour templates on distinct weekdays with distinct
/// locations and relationships, so every context value identifies a single
/// template. When `conflicting` is set the `after` behavior always differs
/// from `before`.
pub fn random_templates<R: Rng>(
    rng: &mut R,
    count: usize,
    conflicting: bool,
) -> Vec<BehaviorTemplate> {
    assert!((1..=7).contains(&count), "between 1 and 7 templates");
    let mut days = WEEKDAYS.to_vec();
    days.shuffle(rng);
    let mut locations = ["office", "home", "car", "gym", "cafe", "campus", "outdoor"];
    locations.shuffle(rng);
    let mut relationships = [
        "colleague",
        "family",
        "friend",
        "mother",
        "partner",
        "manager",
        "other",
    ];
    relationships.shuffle(rng);

    (0..count)
        .map(|i| {
            let start_h = rng.gen_range(0..24);
            let before = BehaviorClass::ALL[rng.gen_range(0..4)];
            let after = if conflicting {
                let others: Vec<BehaviorClass> = BehaviorClass::ALL
                    .into_iter()
                    .filter(|&b| b != before)
                    .collect();
                others[rng.gen_range(0..others.len())]
            } else {
                before
            };
            BehaviorTemplate {
                day: days[i],
                start: start_h * 60,
                end: (start_h + 1) * 60,
                location: locations[i].to_string(),
                relationship: relationships[i].to_string(),
                before,
                after,
            }
        })
        .collect()
}

impl DriftSpec {
    pub fn new(
        total_weeks: u32,
        drift_week: u32,
        records_per_week: u32,
        noise: f64,
        seed: u64,
    ) -> Self {
        DriftSpec {
            total_weeks,
            drift_week,
            records_per_week,
            templates: default_templates(),
            noise,
            seed,
            min_support: 3,
            base_slot: DEFAULT_BASE_SLOT,
        }
    }

    /// Same spec with the `after` profile replaced by `before`.
    pub fn without_drift(mut self) -> Self {
        for t in &mut self.templates {
            t.after = t.before;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSpec(msg));
        if self.drift_week < 1 || self.drift_week >= self.total_weeks {
            return fail(format!(
                "drift week {} must lie in [1, {})",
                self.drift_week, self.total_weeks
            ));
        }
        if self.templates.is_empty() {
            return fail("no behavior templates".into());
        }
        if !(0.0..1.0).contains(&self.noise) {
            return fail(format!("noise {} outside [0, 1)", self.noise));
        }
        let needed = self.min_support.max(1) * self.templates.len() as u64;
        if (self.records_per_week as u64) < needed {
            return fail(format!(
                "{} records per week cannot give {} templates a support of {}",
                self.records_per_week,
                self.templates.len(),
                self.min_support
            ));
        }
        if self.base_slot == 0 || !MINUTES_PER_DAY.is_multiple_of(self.base_slot) {
            return fail(format!(
                "base slot {} does not divide a day",
                self.base_slot
            ));
        }
        for t in &self.templates {
            if t.start >= t.end || t.end > MINUTES_PER_DAY {
                return fail(format!(
                    "template window {}..{} is not inside one day",
                    t.start, t.end
                ));
            }
            if t.start / self.base_slot != (t.end - 1) / self.base_slot {
                return fail(format!(
                    "template window {}..{} crosses a {}-minute slot boundary",
                    t.start, t.end, self.base_slot
                ));
            }
        }
        let mut spans: Vec<(i64, i64)> = self
            .templates
            .iter()
            .map(BehaviorTemplate::week_span)
            .collect();
        spans.sort_unstable();
        if spans.windows(2).any(|w| w[0].1 > w[1].0) {
            return fail("template windows overlap".into());
        }
        Ok(())
    }
}

/// Monday, start of the synthetic calendar.
fn epoch() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2004, 9, 6)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("valid epoch")
}

fn to_call(rng: &mut ChaCha8Rng, behavior: BehaviorClass) -> (CallType, u32) {
    match behavior {
        BehaviorClass::Accept => (CallType::Incoming, rng.gen_range(15..=900)),
        BehaviorClass::Reject => (CallType::Incoming, 0),
        BehaviorClass::Missed => (CallType::Missed, 0),
        BehaviorClass::Outgoing => (CallType::Outgoing, rng.gen_range(15..=900)),
    }
}

/// Generates the log described by `spec`, sorted by timestamp.
///
/// Generated weeks begin where the latest-ending template window ends, and
/// the newest record sits in the final minute of that window. Splitting the
/// log back into 7-day windows anchored at the newest record therefore
/// reproduces the generated weeks exactly.
pub fn generate(spec: &DriftSpec) -> Result<Vec<CallRecord>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let week_start = spec
        .templates
        .iter()
        .map(|t| t.week_span().1)
        .max()
        .unwrap_or(0);
    let last_template = spec
        .templates
        .iter()
        .position(|t| t.week_span().1 == week_start)
        .unwrap_or(0);
    let k = spec.templates.len() as u32;

    let mut records = Vec::with_capacity((spec.total_weeks * spec.records_per_week) as usize);
    for week in 1..=spec.total_weeks {
        let base = epoch() + Duration::minutes(week_start + (week as i64 - 1) * MINUTES_PER_WEEK);
        for (i, t) in spec.templates.iter().enumerate() {
            let offset = (t.week_span().0 - week_start).rem_euclid(MINUTES_PER_WEEK);
            let len = (t.end - t.start) as i64;
            let count =
                spec.records_per_week / k + u32::from((i as u32) < spec.records_per_week % k);
            let profile = if week <= spec.drift_week {
                t.before
            } else {
                t.after
            };
            for c in 0..count {
                let pinned = week == spec.total_weeks && i == last_template && c + 1 == count;
                let minute = if pinned {
                    len - 1
                } else {
                    rng.gen_range(0..len)
                };
                let behavior = if spec.noise > 0.0 && rng.gen_bool(spec.noise) {
                    let others: Vec<BehaviorClass> = BehaviorClass::ALL
                        .into_iter()
                        .filter(|&b| b != profile)
                        .collect();
                    others[rng.gen_range(0..others.len())]
                } else {
                    profile
                };
                let (call_type, duration) = to_call(&mut rng, behavior);
                let correspondent = format!("c{:03}", rng.gen_range(0..40));
                records.push(CallRecord::new(
                    base + Duration::minutes(offset + minute),
                    call_type,
                    duration,
                    t.location.as_str(),
                    t.relationship.as_str(),
                    correspondent,
                ));
            }
        }
    }
    records.sort_by_key(|r| r.timestamp);
    Ok(records)
}
