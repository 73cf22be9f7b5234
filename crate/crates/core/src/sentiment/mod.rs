//! Per-mention sentiment labels, classifiers and evaluation.

mod eval;
mod io;
mod lexicon;
mod split;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use eval::{evaluate, ClassMetrics, EvalReport};
pub use io::{
    attach_articles, import_external_labels, parse_external_labels, read_labels, write_labels, ImportReport,
    RowError,
};
pub use lexicon::{
    classify_corpus, ClassifyReport, Lexicon, LexiconClassifier, DEFAULT_LEXICON_EN, DEFAULT_LEXICON_FR,
    DEFAULT_TAU, DEFAULT_WINDOW,
};
pub use split::{chronological_split, train_article_ids, DEFAULT_SPLIT_RATIO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sentiment {
    #[serde(rename = "POS")]
    Pos,
    #[serde(rename = "NEG")]
    Neg,
    #[serde(rename = "NEU")]
    Neu,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Pos, Sentiment::Neg, Sentiment::Neu];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn word(self) -> &'static str {
        match self {
            Sentiment::Pos => "positive",
            Sentiment::Neg => "negative",
            Sentiment::Neu => "neutral",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sentiment::Pos => "POS",
            Sentiment::Neg => "NEG",
            Sentiment::Neu => "NEU",
        })
    }
}

/// Accepts `positive`/`negative`/`neutral` and `POS`/`NEG`/`NEU`, any case.
impl FromStr for Sentiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" => Ok(Sentiment::Pos),
            "negative" | "neg" => Ok(Sentiment::Neg),
            "neutral" | "neu" => Ok(Sentiment::Neu),
            other => Err(format!("unknown sentiment `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelSource {
    #[serde(rename = "LEXICON")]
    Lexicon,
    #[serde(rename = "EXTERNAL")]
    External,
}

impl fmt::Display for LabelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelSource::Lexicon => "LEXICON",
            LabelSource::External => "EXTERNAL",
        })
    }
}

impl FromStr for LabelSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "LEXICON" => Ok(LabelSource::Lexicon),
            "EXTERNAL" => Ok(LabelSource::External),
            other => Err(format!("unknown label source `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityLabel {
    pub article_id: String,
    pub entity_id: String,
    pub sentiment: Sentiment,
    pub confidence: f64,
    pub source: LabelSource,
}

impl EntityLabel {
    pub fn key(&self) -> (String, String) {
        (self.article_id.clone(), self.entity_id.clone())
    }
}

/// A label joined with the outlet and publication time of its article,
/// which is what scoring, bias estimation and forecasting need.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedLabel {
    pub label: EntityLabel,
    pub outlet: String,
    pub published_at: DateTime<Utc>,
}

/// Collapses labels to one per (article, entity); later entries win.
pub fn unique_labels<I>(labels: I) -> Vec<EntityLabel>
where
    I: IntoIterator<Item = EntityLabel>,
{
    let mut map = BTreeMap::new();
    for l in labels {
        map.insert(l.key(), l);
    }
    map.into_values().collect()
}
