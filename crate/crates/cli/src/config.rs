//! The pipeline configuration file.
//!
//! ```toml
//! roster = "roster.toml"
//! output_dir = "out"
//! context_keywords = ["election*", "campagne"]
//! gold_labels = "gold_labels.csv"
//!
//! [date_range]
//! from = "2024-01-01"
//! to = "2024-11-09"
//!
//! [params]
//! window = 25
//! tau = 0.0
//! min_support = 10
//! split_ratio = 0.8
//! relevance_window = 50
//!
//! [trend]
//! from = "2024-W27"
//! to = "2024-W44"
//!
//! [[outlet]]
//! id = "lexpress"
//! local_dir = "outlets/lexpress"
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Deserialize;

use seatcast_core::ingest::{OutletConfig, DEFAULT_RELEVANCE_WINDOW};
use seatcast_core::sentiment::{DEFAULT_SPLIT_RATIO, DEFAULT_TAU, DEFAULT_WINDOW};
use seatcast_core::window::{TimeWindow, Week};
use seatcast_core::{bias::DEFAULT_MIN_SUPPORT, Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub roster: PathBuf,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub date_range: Option<DateRange>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub text: TextFiles,
    /// Words that mark an article as political; `*` suffix matches a prefix.
    #[serde(default)]
    pub context_keywords: Vec<String>,
    /// Labels from an external classifier, used instead of the lexicon.
    #[serde(default)]
    pub external_labels: Option<PathBuf>,
    /// Reference labels for evaluation on the test split.
    #[serde(default)]
    pub gold_labels: Option<PathBuf>,
    #[serde(default)]
    pub trend: Option<TrendWeeks>,
    #[serde(default, rename = "outlet")]
    pub outlets: Vec<OutletConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Inclusive calendar dates, UTC.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DateRange {
    pub from: NaiveDate,
    pub to: NaiveDate,
}

impl DateRange {
    pub fn window(&self) -> TimeWindow {
        TimeWindow::from_dates(self.from, self.to)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub window: usize,
    pub tau: f64,
    pub min_support: u64,
    pub split_ratio: f64,
    pub relevance_window: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            tau: DEFAULT_TAU,
            min_support: DEFAULT_MIN_SUPPORT,
            split_ratio: DEFAULT_SPLIT_RATIO,
            relevance_window: DEFAULT_RELEVANCE_WINDOW,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        check_window(self.window)?;
        check_tau(self.tau)?;
        check_ratio(self.split_ratio)
    }
}

pub fn check_window(window: usize) -> Result<()> {
    if window == 0 {
        return Err(Error::Config("window must be at least 1".into()));
    }
    Ok(())
}

pub fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Config(format!("tau must be a non-negative number, got {tau}")));
    }
    Ok(())
}

pub fn check_ratio(ratio: f64) -> Result<()> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Config(format!("split_ratio must lie in (0, 1), got {ratio}")));
    }
    Ok(())
}

/// Optional replacements for the bundled text resources.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TextFiles {
    pub lexicon_en: Option<PathBuf>,
    pub lexicon_fr: Option<PathBuf>,
    pub stopwords_en: Option<PathBuf>,
    pub stopwords_fr: Option<PathBuf>,
    pub stem_exceptions: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendWeeks {
    #[serde(deserialize_with = "week")]
    pub from: Week,
    #[serde(deserialize_with = "week")]
    pub to: Week,
}

fn week<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Week, D::Error> {
    let raw = String::deserialize(d)?;
    raw.parse().map_err(serde::de::Error::custom)
}

impl PipelineConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("pipeline config: {e}")))?;
        cfg.resolve(base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.roster);
        fix(&mut self.output_dir);
        for p in [
            &mut self.text.lexicon_en,
            &mut self.text.lexicon_fr,
            &mut self.text.stopwords_en,
            &mut self.text.stopwords_fr,
            &mut self.text.stem_exceptions,
            &mut self.external_labels,
            &mut self.gold_labels,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        for o in &mut self.outlets {
            if let Some(dir) = &mut o.local_dir {
                fix(dir);
            }
        }
    }

    fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let Some(r) = self.date_range {
            if r.from > r.to {
                return Err(Error::Config(format!("date_range: {} is after {}", r.from, r.to)));
            }
        }
        if let Some(t) = self.trend {
            if t.from >= t.to {
                return Err(Error::Config(format!("trend: {} does not precede {}", t.from, t.to)));
            }
        }
        if self.outlets.is_empty() {
            return Err(Error::Config("at least one [[outlet]] is required".into()));
        }
        let mut ids = std::collections::BTreeSet::new();
        for o in &self.outlets {
            if !ids.insert(&o.id) {
                return Err(Error::Config(format!("duplicate outlet `{}`", o.id)));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> TimeWindow {
        self.date_range.map_or_else(TimeWindow::unbounded, |r| r.window())
    }

    pub fn outlet_ids(&self) -> Vec<String> {
        self.outlets.iter().map(|o| o.id.clone()).collect()
    }
}
