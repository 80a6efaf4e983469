//! Detects how much of a phone call log reflects the user's current behavior.
//!
//! The log is split into 7-day windows counted back from the newest call.
//! Each window is mined for context associations (time segment, weekday,
//! location, relationship) and the dominant behavior of each association.
//! Adjacent windows are compared by the share of common associations whose
//! dominant behavior disagrees, and the scan from the newest window backwards
//! stops at the first pair where that share is significant.
//!
//! ```no_run
//! use callrecency::{analyze, parse_log, AnalysisConfig, ColumnMapping};
//!
//! let file = std::fs::File::open("calls.csv")?;
//! let log = parse_log(file, &ColumnMapping::default())?;
//! let result = analyze(&log.records, &AnalysisConfig::default())?;
//! println!("recent weeks: {}", result.recent_weeks);
//! # Ok::<(), callrecency::Error>(())
//! ```

pub mod analysis;
pub mod config;
pub mod error;
pub mod log_model;
pub mod mining;
pub mod recency;
pub mod report;
pub mod segmentation;
pub mod synth;

pub use analysis::{analyze, score_log, Scored};
pub use config::{AnalysisConfig, OutputFormat};
pub use error::{Error, Result};
pub use log_model::{
    derive_behavior, parse_log, write_log, BehaviorClass, CallRecord, CallType, ColumnMapping,
    ParsedLog,
};
pub use mining::{
    context_precedence, dominant_behavior, entropy, generate_associations, information_gain,
    AssociationTable, BehaviorDistribution, ContextAssociation, ContextAttribute, Contextual,
};
pub use recency::{
    aggregate_recent, conflict_score, detect_boundary, score_series, split_by_week, ConflictScore,
    RecencyResult, WeekDataset,
};
pub use segmentation::{assign_segment, build_segments, LabeledRecord, Segmentation, TimeSegment};
pub use synth::{generate, DriftSpec};
