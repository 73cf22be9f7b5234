//! Text normalization: markup stripping, language detection, tokenization
//! and stemming.

mod clean;
mod lang;
pub mod stem;
mod tokenize;

pub use clean::clean_text;
pub use lang::detect_language;
pub use stem::Stemmer;
pub use tokenize::{fold, Token, TokenizedArticle, Tokenizer};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Language {
    #[serde(rename = "EN")]
    En,
    #[serde(rename = "FR")]
    Fr,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::En => "EN",
            Language::Fr => "FR",
            Language::Unknown => "UNKNOWN",
        })
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "EN" => Ok(Language::En),
            "FR" => Ok(Language::Fr),
            "UNKNOWN" => Ok(Language::Unknown),
            other => Err(format!("unknown language `{other}`")),
        }
    }
}

pub const DEFAULT_STOPWORDS_EN: &str = include_str!("../../data/stopwords_en.txt");
pub const DEFAULT_STOPWORDS_FR: &str = include_str!("../../data/stopwords_fr.txt");

/// Non-empty, trimmed lines of a data file with `#` comments removed.
pub fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split_once('#').map_or(l, |(before, _)| before).trim()).filter(|l| !l.is_empty())
}

#[derive(Debug, Clone, Default)]
pub struct StopWords {
    en: HashSet<String>,
    fr: HashSet<String>,
}

impl StopWords {
    pub fn from_lists(en: &str, fr: &str) -> Self {
        let parse = |t: &str| data_lines(t).map(str::to_lowercase).collect();
        Self { en: parse(en), fr: parse(fr) }
    }

    pub fn builtin() -> Self {
        Self::from_lists(DEFAULT_STOPWORDS_EN, DEFAULT_STOPWORDS_FR)
    }

    /// Unknown-language text is filtered against both lists.
    pub fn contains(&self, word: &str, language: Language) -> bool {
        match language {
            Language::En => self.en.contains(word),
            Language::Fr => self.fr.contains(word),
            Language::Unknown => self.en.contains(word) || self.fr.contains(word),
        }
    }

    pub(crate) fn hits(&self, word: &str) -> (bool, bool) {
        (self.en.contains(word), self.fr.contains(word))
    }
}
