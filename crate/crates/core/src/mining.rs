//! Categorical mining over context attributes: entropy, information gain,
//! attribute precedence, incremental association generation and dominant
//! behavior.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log_model::BehaviorClass;

/// A categorical context dimension of a call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextAttribute {
    TimeSegment,
    DayOfWeek,
    Location,
    Relationship,
}

impl ContextAttribute {
    pub const DEFAULT_ORDER: [ContextAttribute; 4] = [
        ContextAttribute::TimeSegment,
        ContextAttribute::DayOfWeek,
        ContextAttribute::Location,
        ContextAttribute::Relationship,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ContextAttribute::TimeSegment => "time_segment",
            ContextAttribute::DayOfWeek => "day_of_week",
            ContextAttribute::Location => "location",
            ContextAttribute::Relationship => "relationship",
        }
    }
}

impl fmt::Display for ContextAttribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContextAttribute {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "time_segment" => Ok(ContextAttribute::TimeSegment),
            "day_of_week" => Ok(ContextAttribute::DayOfWeek),
            "location" => Ok(ContextAttribute::Location),
            "relationship" => Ok(ContextAttribute::Relationship),
            other => Err(format!("unknown context attribute `{other}`")),
        }
    }
}

/// Anything that exposes a categorical value per context attribute and a
/// behavior class to mine against.
pub trait Contextual {
    fn context_value(&self, attribute: ContextAttribute) -> &str;
    fn behavior(&self) -> BehaviorClass;
}

/// Per-class occurrence counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BehaviorDistribution {
    counts: [u64; 4],
}

impl BehaviorDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [u64; 4]) -> Self {
        BehaviorDistribution { counts }
    }

    pub fn record(&mut self, behavior: BehaviorClass) {
        self.counts[behavior.index()] += 1;
    }

    pub fn count(&self, behavior: BehaviorClass) -> u64 {
        self.counts[behavior.index()]
    }

    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl FromIterator<BehaviorClass> for BehaviorDistribution {
    fn from_iter<I: IntoIterator<Item = BehaviorClass>>(iter: I) -> Self {
        let mut dist = BehaviorDistribution::new();
        for b in iter {
            dist.record(b);
        }
        dist
    }
}

impl AddAssign for BehaviorDistribution {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a += b;
        }
    }
}

impl Add for BehaviorDistribution {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

/// A conjunction of context bindings, at most one per attribute.
///
/// Bindings are kept sorted by attribute, so equality and hashing do not
/// depend on the order the bindings were added in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextAssociation {
    bindings: BTreeMap<ContextAttribute, String>,
}

impl ContextAssociation {
    /// Returns `None` for an empty binding list or when an attribute is bound
    /// twice.
    pub fn new<I, S>(bindings: I) -> Option<Self>
    where
        I: IntoIterator<Item = (ContextAttribute, S)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (attr, value) in bindings {
            if map.insert(attr, value.into()).is_some() {
                return None;
            }
        }
        (!map.is_empty()).then_some(ContextAssociation { bindings: map })
    }

    pub fn get(&self, attribute: ContextAttribute) -> Option<&str> {
        self.bindings.get(&attribute).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (ContextAttribute, &str)> {
        self.bindings.iter().map(|(a, v)| (*a, v.as_str()))
    }

    /// True when every binding of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &ContextAssociation) -> bool {
        self.bindings
            .iter()
            .all(|(a, v)| other.bindings.get(a) == Some(v))
    }

    pub fn matches<R: Contextual + ?Sized>(&self, record: &R) -> bool {
        self.bindings
            .iter()
            .all(|(a, v)| record.context_value(*a) == v)
    }
}

impl fmt::Display for ContextAssociation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (attr, value)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{attr}={value}")?;
        }
        Ok(())
    }
}

/// Associations mined from one dataset, keyed in a deterministic order.
pub type AssociationTable = BTreeMap<ContextAssociation, BehaviorDistribution>;

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(dist: &BehaviorDistribution) -> Result<f64> {
    let total = dist.total();
    if total == 0 {
        return Err(Error::EmptyDistribution);
    }
    let total = total as f64;
    let h = dist
        .counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Class with the highest count; ties go to the class that sorts first.
pub fn dominant_behavior(dist: &BehaviorDistribution) -> Result<BehaviorClass> {
    if dist.total() == 0 {
        return Err(Error::EmptyDistribution);
    }
    let mut best = BehaviorClass::Accept;
    for class in BehaviorClass::ALL {
        if dist.count(class) > dist.count(best) {
            best = class;
        }
    }
    Ok(best)
}

/// Reduction in behavior entropy from partitioning `records` on `attribute`.
pub fn information_gain<R: Contextual>(records: &[R], attribute: ContextAttribute) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let whole: BehaviorDistribution = records.iter().map(Contextual::behavior).collect();
    let base = entropy(&whole)?;

    let mut groups: BTreeMap<&str, BehaviorDistribution> = BTreeMap::new();
    for r in records {
        groups
            .entry(r.context_value(attribute))
            .or_default()
            .record(r.behavior());
    }

    // Summing subsets in count order makes the gain independent of how the
    // attribute's values happen to be spelled.
    let mut subsets: Vec<[u64; 4]> = groups.values().map(|d| d.counts()).collect();
    subsets.sort_unstable();

    let n = records.len() as f64;
    let mut conditional = 0.0;
    for counts in subsets {
        let d = BehaviorDistribution::from_counts(counts);
        conditional += d.total() as f64 / n * entropy(&d)?;
    }
    Ok((base - conditional).clamp(0.0, base))
}

/// Orders attributes by information gain, highest first. Equal gains keep
/// their input order.
pub fn context_precedence<R: Contextual>(
    records: &[R],
    attributes: &[ContextAttribute],
) -> Result<Vec<ContextAttribute>> {
    let mut scored = attributes
        .iter()
        .map(|&a| information_gain(records, a).map(|g| (a, g)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|x, y| y.1.total_cmp(&x.1));
    Ok(scored.into_iter().map(|(a, _)| a).collect())
}

/// Grows associations one attribute at a time along `precedence`.
///
/// For every prefix of the precedence list, each observed value tuple becomes
/// an association carrying the behavior distribution of its matching records.
/// Associations supported by fewer than `min_support` records are dropped.
pub fn generate_associations<R: Contextual>(
    records: &[R],
    precedence: &[ContextAttribute],
    min_support: u64,
) -> Result<AssociationTable> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if precedence.is_empty() {
        return Err(Error::InvalidConfig("attribute precedence is empty".into()));
    }

    let mut table = AssociationTable::new();
    for k in 1..=precedence.len() {
        let prefix = &precedence[..k];
        let mut groups: BTreeMap<Vec<&str>, BehaviorDistribution> = BTreeMap::new();
        for r in records {
            let key: Vec<&str> = prefix.iter().map(|&a| r.context_value(a)).collect();
            groups.entry(key).or_default().record(r.behavior());
        }
        for (values, dist) in groups {
            if dist.total() < min_support {
                continue;
            }
            let assoc = ContextAssociation::new(prefix.iter().copied().zip(values))
                .ok_or_else(|| Error::InvalidConfig("attribute repeated in precedence".into()))?;
            table.insert(assoc, dist);
        }
    }
    Ok(table)
}
