use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("column `{0}` is not present in the log header")]
    MissingColumn(String),

    #[error("log contains no valid records")]
    EmptyLog,

    #[error("base slot of {0} minutes does not divide a day (1440 minutes)")]
    InvalidSlot(u32),

    #[error("behavior distribution is empty")]
    EmptyDistribution,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("need at least 2 weeks of log, found {0}")]
    InsufficientWeeks(usize),

    #[error("boundary pair ({0}, {1}) does not match the week list")]
    BoundaryMismatch(u32, u32),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid drift spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
