use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid input: {0}")]
    Data(String),

    #[error("COUNT_INCONSISTENT: omega ({omega}) + psi ({psi}) exceeds phi ({phi})")]
    CountInconsistent { omega: u64, psi: u64, phi: u64 },

    #[error("NO_MENTION: entity {entity} is not mentioned in article {article}")]
    NoMention { article: String, entity: String },

    #[error(
        "KEY_MISMATCH: {} key(s) missing from predictions, {} missing from gold: {}",
        missing_in_predicted.len(),
        missing_in_gold.len(),
        describe_keys(missing_in_predicted, missing_in_gold)
    )]
    KeyMismatch { missing_in_predicted: Vec<(String, String)>, missing_in_gold: Vec<(String, String)> },

    #[error("UNDEFINED_BASELINE: cumulative SIS at the baseline week is zero")]
    UndefinedBaseline,

    #[error("split ratio {0} is outside (0, 1)")]
    InvalidRatio(f64),

    #[error("score {0} is outside [-1, 1]")]
    ScoreOutOfRange(f64),

    #[error("duplicate constituency `{0}`")]
    DuplicateConstituency(String),

    #[error("week {0} is not covered by the series")]
    WeekNotInSeries(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Whether the error stems from configuration rather than input data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

fn describe_keys(pred: &[(String, String)], gold: &[(String, String)]) -> String {
    pred.iter()
        .map(|(a, e)| format!("-pred({a},{e})"))
        .chain(gold.iter().map(|(a, e)| format!("-gold({a},{e})")))
        .collect::<Vec<_>>()
        .join(" ")
}
