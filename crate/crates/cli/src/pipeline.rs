//! Pipeline stages shared by the individual subcommands and `all`.
//!
//! Stages compute everything in memory; outputs are collected into an
//! [`Outputs`] bundle and written only once the whole command succeeded.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;

use seatcast_core::bias::{identify_bias, write_bias, BiasTable};
use seatcast_core::forecast::{
    forecast_all, render_chart, write_forecast, write_forecast_detail, NationalForecast,
};
use seatcast_core::ingest::{
    self, write_corpus, Article, ContextKeywords, IngestReport, IngestSettings, OutletConfig,
};
use seatcast_core::roster::Roster;
use seatcast_core::scoring::{
    cumulative_sis, sis_change, weekly_series, write_series, Scope, SentimentSeries, Subject,
};
use seatcast_core::sentiment::{
    attach_articles, classify_corpus, evaluate, parse_external_labels, train_article_ids, DatedLabel,
    EntityLabel, EvalReport, Lexicon, LexiconClassifier, Sentiment,
};
use seatcast_core::text::{Stemmer, StopWords, Tokenizer, DEFAULT_STOPWORDS_EN, DEFAULT_STOPWORDS_FR};
use seatcast_core::window::{TimeWindow, Week};
use seatcast_core::{Error, Result};

use crate::manifest::Manifest;

/// Files to write, plus the manifest describing them.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<(PathBuf, Vec<u8>)>,
    pub manifest: Manifest,
    manifest_name: String,
}

impl Outputs {
    /// `dir` is where the manifest goes; output names in it are relative to `dir`.
    pub fn new(dir: impl Into<PathBuf>, command: &str, manifest_name: impl Into<String>) -> Self {
        Self {
            dir: dir.into(),
            files: Vec::new(),
            manifest: Manifest::new(command),
            manifest_name: manifest_name.into(),
        }
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>) {
        let path = path.into();
        let name = path
            .strip_prefix(&self.dir)
            .map_or_else(|_| path.display().to_string(), |p| p.display().to_string());
        self.manifest.output(name, &bytes);
        self.files.push((path, bytes));
    }

    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let manifest = (self.dir.join(&self.manifest_name), self.manifest.to_json());
        for (path, bytes) in self.files.into_iter().chain(std::iter::once(manifest)) {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Reads an input data file; failures are input-data errors.
pub fn read_input(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

/// Reads a file referenced by configuration; failures are config errors.
pub fn read_config_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Loads the roster, recording its digest.
pub fn load_roster(path: &Path, manifest: &mut Manifest, name: &str) -> Result<Roster> {
    let text = read_config_file(path)?;
    manifest.input(name, text.as_bytes());
    Roster::parse(&text)
}

/// Lexicon, stop-word and stemmer-exception overrides plus classifier knobs.
#[derive(Debug, Clone, Default)]
pub struct TextOptions {
    pub lexicon_en: Option<PathBuf>,
    pub lexicon_fr: Option<PathBuf>,
    pub stopwords_en: Option<PathBuf>,
    pub stopwords_fr: Option<PathBuf>,
    pub stem_exceptions: Option<PathBuf>,
    pub window: usize,
    pub tau: f64,
}

impl TextOptions {
    fn load(
        &self,
        path: &Option<PathBuf>,
        builtin: &str,
        manifest: &mut Manifest,
        base: &Path,
    ) -> Result<String> {
        match path {
            Some(p) => {
                let text = read_config_file(p)?;
                manifest.input(display_rel(p, base), text.as_bytes());
                Ok(text)
            }
            None => Ok(builtin.to_string()),
        }
    }

    pub fn stopwords(&self, manifest: &mut Manifest, base: &Path) -> Result<StopWords> {
        let en = self.load(&self.stopwords_en, DEFAULT_STOPWORDS_EN, manifest, base)?;
        let fr = self.load(&self.stopwords_fr, DEFAULT_STOPWORDS_FR, manifest, base)?;
        Ok(StopWords::from_lists(&en, &fr))
    }

    pub fn classifier(&self, manifest: &mut Manifest, base: &Path) -> Result<LexiconClassifier> {
        crate::config::check_window(self.window)?;
        crate::config::check_tau(self.tau)?;
        let stopwords = self.stopwords(manifest, base)?;
        let stemmer = match &self.stem_exceptions {
            Some(_) => Stemmer::with_exceptions(&self.load(&self.stem_exceptions, "", manifest, base)?),
            None => Stemmer::new(),
        };
        let en = self.load(&self.lexicon_en, seatcast_core::sentiment::DEFAULT_LEXICON_EN, manifest, base)?;
        let fr = self.load(&self.lexicon_fr, seatcast_core::sentiment::DEFAULT_LEXICON_FR, manifest, base)?;
        let lexicon = Lexicon::parse(&en, &fr, &stemmer)?;
        manifest.param("window", self.window);
        manifest.param("tau", self.tau);
        Ok(LexiconClassifier::new(lexicon, Tokenizer::new(stopwords, stemmer), self.window, self.tau))
    }
}

/// `path` relative to `base` with `/` separators when possible.
pub fn display_rel(path: &Path, base: &Path) -> String {
    let rel = path.strip_prefix(base).unwrap_or(path);
    rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}

/// Records the digest of every page an outlet reads from disk.
pub fn hash_outlet_pages(outlets: &[OutletConfig], manifest: &mut Manifest, base: &Path) -> Result<()> {
    for o in outlets {
        let Some(dir) = &o.local_dir else {
            manifest.param(&format!("outlet.{}.base_url", o.id), o.base_url.clone().unwrap_or_default());
            continue;
        };
        let entries = std::fs::read_dir(dir)
            .map_err(|e| Error::Config(format!("outlet `{}`: cannot read {}: {e}", o.id, dir.display())))?;
        let mut pages: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "html" || x == "htm"))
            .collect();
        pages.sort();
        for p in pages {
            manifest.input(display_rel(&p, base), &read_input(&p)?);
        }
    }
    Ok(())
}

pub struct IngestInputs<'a> {
    pub outlets: &'a [OutletConfig],
    pub window: TimeWindow,
    pub roster: &'a Roster,
    pub keywords: &'a [String],
    pub relevance_window: usize,
    pub stopwords: &'a StopWords,
}

pub fn run_ingest(inputs: &IngestInputs<'_>) -> Result<IngestReport> {
    let report = ingest::ingest(&IngestSettings {
        outlets: inputs.outlets,
        window: inputs.window,
        entities: inputs.roster.entities(),
        keywords: ContextKeywords::new(inputs.keywords),
        relevance_window: inputs.relevance_window,
        stopwords: inputs.stopwords,
    })?;
    for r in &report.rejects {
        eprintln!("rejected {} ({}): {}", r.source, r.outlet, r.reason);
    }
    Ok(report)
}

pub fn corpus_bytes(articles: &[Article]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_corpus(&mut buf, articles).expect("writing to memory");
    buf
}

/// CSV of every page or article that did not make it into the corpus.
pub fn ingest_log_bytes(report: &IngestReport) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stage", "outlet", "source", "article_id", "reason"]).expect("in-memory csv");
    for r in &report.rejects {
        w.write_record(["fetch", r.outlet.as_str(), r.source.as_str(), "", &r.reason.to_string()])
            .expect("in-memory csv");
    }
    for d in &report.dropped {
        w.write_record(["filter", "", d.url.as_str(), d.article_id.as_str(), d.reason.as_str()])
            .expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// Lexicon labels for every matched pair, or external labels joined to the corpus.
pub fn run_classify(
    articles: &[Article],
    roster: &Roster,
    classifier: &LexiconClassifier,
    external: Option<&[u8]>,
) -> Result<Vec<DatedLabel>> {
    match external {
        None => {
            let report = classify_corpus(classifier, articles, roster);
            for (a, e) in &report.missed {
                eprintln!("no mention of {e} found in article {a}; pair skipped");
            }
            Ok(report.labels)
        }
        Some(bytes) => {
            let report = parse_external_labels(bytes, roster)?;
            for r in &report.rejected {
                eprintln!("external labels line {}: {}", r.line, r.reason);
            }
            let (dated, orphans) = attach_articles(report.labels, articles);
            for o in &orphans {
                eprintln!("external label for unknown article {} dropped", o.article_id);
            }
            Ok(dated)
        }
    }
}

pub fn labels_bytes(labels: &[DatedLabel]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    seatcast_core::sentiment::write_labels(&mut buf, labels)?;
    Ok(buf)
}

/// Bias from the chronologically first `split_ratio` of the labelled articles.
pub fn run_bias(
    labels: &[DatedLabel],
    roster: &Roster,
    outlets: &[String],
    window: TimeWindow,
    split_ratio: f64,
    min_support: u64,
) -> Result<BiasTable> {
    let mut outlets: BTreeSet<String> = outlets.iter().cloned().collect();
    outlets.extend(labels.iter().map(|l| l.outlet.clone()));
    let outlets: Vec<String> = outlets.into_iter().collect();
    let entities: Vec<String> = roster.entities().iter().map(|e| e.entity_id.clone()).collect();
    if labels.is_empty() {
        warn!("no labels; every bias is 0");
        return Ok(identify_bias(&[], &outlets, &entities, window, min_support));
    }
    let train = train_article_ids(labels, split_ratio)?;
    let train_labels: Vec<DatedLabel> =
        labels.iter().filter(|l| train.contains(&l.label.article_id)).cloned().collect();
    Ok(identify_bias(&train_labels, &outlets, &entities, window, min_support))
}

pub fn bias_bytes(table: &BiasTable) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_bias(&mut buf, table)?;
    Ok(buf)
}

/// The range a series covers: the configured one, else the span of the labels.
pub fn series_range(labels: &[DatedLabel], configured: Option<TimeWindow>) -> Option<TimeWindow> {
    configured.or_else(|| {
        let first = labels.iter().map(|l| l.published_at).min()?;
        let last = labels.iter().map(|l| l.published_at).max()?;
        Some(TimeWindow::from_dates(first.date_naive(), last.date_naive()))
    })
}

/// Weekly series for each entity nationally and per outlet, and for each
/// party nationally and per constituency.
pub fn run_series(labels: &[DatedLabel], roster: &Roster, range: TimeWindow) -> Result<Vec<SentimentSeries>> {
    let outlets: BTreeSet<&str> = labels.iter().map(|l| l.outlet.as_str()).collect();
    let mut wanted: Vec<(Subject, Scope)> = Vec::new();
    for p in roster.party_ids() {
        wanted.push((Subject::Party(p.into()), Scope::National));
        for c in roster.constituencies() {
            wanted.push((Subject::Party(p.into()), Scope::Constituency(c.constituency_id.clone())));
        }
    }
    for e in roster.entities() {
        wanted.push((Subject::Entity(e.entity_id.clone()), Scope::National));
        for o in &outlets {
            wanted.push((Subject::Entity(e.entity_id.clone()), Scope::Outlet(o.to_string())));
        }
    }
    wanted.iter().map(|(subject, scope)| weekly_series(labels, subject, scope, range, roster)).collect()
}

pub fn series_bytes(series: &[SentimentSeries]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_series(&mut buf, series)?;
    Ok(buf)
}

/// Change in cumulative national SIS per party between two weeks.
pub fn trend_bytes(series: &[SentimentSeries], roster: &Roster, from: Week, to: Week) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["subject", "scope", "from_week", "to_week", "sis_from", "sis_to", "percent_change"])
        .expect("in-memory csv");
    for p in roster.party_ids() {
        let subject = Subject::Party(p.into());
        let Some(s) = series.iter().find(|s| s.subject == subject && s.scope == Scope::National) else {
            continue;
        };
        let cumulative = cumulative_sis(s);
        let at = |wk: Week| cumulative.iter().find(|(x, _)| *x == wk).map(|(_, v)| v.to_string());
        let change = match sis_change(&cumulative, from, to) {
            Ok(v) => v.to_string(),
            Err(Error::UndefinedBaseline) => "UNDEFINED_BASELINE".into(),
            Err(e) => {
                eprintln!("trend for {subject}: {e}");
                "NA".into()
            }
        };
        w.write_record([
            subject.to_string(),
            Scope::National.to_string(),
            from.to_string(),
            to.to_string(),
            at(from).unwrap_or_else(|| "NA".into()),
            at(to).unwrap_or_else(|| "NA".into()),
            change,
        ])
        .expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

pub fn run_forecast(
    labels: &[DatedLabel],
    bias: &BiasTable,
    roster: &Roster,
    window: TimeWindow,
) -> Result<NationalForecast> {
    let forecast = forecast_all(labels, bias, roster, window)?;
    for c in forecast.per_constituency.iter().filter(|c| c.fallback_used) {
        eprintln!("{}: no local coverage for some party, national score used", c.constituency_id);
    }
    Ok(forecast)
}

pub struct ForecastFiles {
    pub table: Vec<u8>,
    pub detail: Vec<u8>,
    pub chart: Vec<u8>,
}

pub fn forecast_files(forecast: &NationalForecast, roster: &Roster) -> Result<ForecastFiles> {
    let mut table = Vec::new();
    write_forecast(&mut table, forecast, roster.party_ids())?;
    let mut detail = Vec::new();
    write_forecast_detail(&mut detail, forecast)?;
    Ok(ForecastFiles { table, detail, chart: render_chart(forecast, roster).into_bytes() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalSplit {
    All,
    Train,
    Test,
}

/// Restricts both label sets to the requested split of the predicted
/// labels' articles, then evaluates.
pub fn run_evaluate(
    predicted: &[DatedLabel],
    gold: &[EntityLabel],
    split: EvalSplit,
    split_ratio: f64,
) -> Result<EvalReport> {
    let keep: Option<BTreeSet<String>> = match split {
        EvalSplit::All => None,
        EvalSplit::Train | EvalSplit::Test => {
            let train = train_article_ids(predicted, split_ratio)?;
            let all: BTreeSet<String> = predicted.iter().map(|l| l.label.article_id.clone()).collect();
            Some(if split == EvalSplit::Train { train } else { all.difference(&train).cloned().collect() })
        }
    };
    let in_split = |id: &String| keep.as_ref().is_none_or(|k| k.contains(id));
    let pred: Vec<EntityLabel> =
        predicted.iter().filter(|l| in_split(&l.label.article_id)).map(|l| l.label.clone()).collect();
    let gold: Vec<EntityLabel> = gold.iter().filter(|l| in_split(&l.article_id)).cloned().collect();
    evaluate(&pred, &gold)
}

#[derive(Serialize)]
struct ClassJson {
    precision: f64,
    recall: f64,
    f1: f64,
}

#[derive(Serialize)]
struct EvalJson<'a> {
    split: &'a str,
    pairs: u64,
    accuracy: f64,
    macro_f1: f64,
    per_class: std::collections::BTreeMap<String, ClassJson>,
    /// Rows are gold classes, columns predicted, in POS, NEG, NEU order.
    confusion: [[u64; 3]; 3],
}

pub fn evaluation_bytes(report: &EvalReport, split: EvalSplit) -> Vec<u8> {
    let json = EvalJson {
        split: match split {
            EvalSplit::All => "all",
            EvalSplit::Train => "train",
            EvalSplit::Test => "test",
        },
        pairs: report.confusion.iter().flatten().sum(),
        accuracy: report.accuracy,
        macro_f1: report.macro_f1,
        per_class: report
            .per_class
            .iter()
            .map(|(k, m)| (k.to_string(), ClassJson { precision: m.precision, recall: m.recall, f1: m.f1 }))
            .collect(),
        confusion: report.confusion,
    };
    let mut s = serde_json::to_string_pretty(&json).expect("evaluation serializes");
    s.push('\n');
    s.into_bytes()
}

/// Human-readable evaluation summary.
pub fn evaluation_text(report: &EvalReport) -> String {
    let mut out = format!("accuracy {:.4}  macro-F1 {:.4}\n", report.accuracy, report.macro_f1);
    out.push_str("class  precision  recall  f1\n");
    for (class, m) in &report.per_class {
        out.push_str(&format!("{class:<5}  {:>9.4}  {:>6.4}  {:.4}\n", m.precision, m.recall, m.f1));
    }
    out.push_str("confusion (rows gold, columns predicted: POS NEG NEU)\n");
    for (class, row) in Sentiment::ALL.iter().zip(report.confusion) {
        out.push_str(&format!("{class:<5} {:>4} {:>4} {:>4}\n", row[0], row[1], row[2]));
    }
    out
}
