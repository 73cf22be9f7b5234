//! Subcommand implementations. Each returns the files it wrote.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::Args;

use seatcast_core::bias::{read_bias, DEFAULT_MIN_SUPPORT};
use seatcast_core::ingest::load_corpus;
use seatcast_core::roster::Roster;
use seatcast_core::sentiment::{
    parse_external_labels, read_labels, DatedLabel, DEFAULT_SPLIT_RATIO, DEFAULT_TAU, DEFAULT_WINDOW,
};
use seatcast_core::window::{TimeWindow, Week};
use seatcast_core::{Error, Result};

use crate::config::{check_ratio, PipelineConfig};
use crate::manifest::Manifest;
use crate::pipeline::{self as p, EvalSplit, IngestInputs, Outputs, TextOptions};

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct RangeArgs {
    /// First day included (UTC), e.g. 2024-01-01.
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last day included (UTC).
    #[arg(long)]
    pub to: Option<NaiveDate>,
}

impl RangeArgs {
    pub fn window(&self) -> Result<Option<TimeWindow>> {
        match (self.from, self.to) {
            (None, None) => Ok(None),
            (from, to) => {
                let from = from.unwrap_or(NaiveDate::MIN);
                let to = to.unwrap_or(NaiveDate::MAX.pred_opt().expect("date before max"));
                if from > to {
                    return Err(Error::Config(format!("--from {from} is after --to {to}")));
                }
                Ok(Some(TimeWindow::from_dates(from, to)))
            }
        }
    }

    fn record(&self, m: &mut Manifest) {
        if let Some(d) = self.from {
            m.param("from", d);
        }
        if let Some(d) = self.to {
            m.param("to", d);
        }
    }
}

/// Manifest written next to a single-command output: `<file>.manifest.json`.
fn outputs_for(out: &Path, command: &str) -> Outputs {
    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
    let name = format!(
        "{}.manifest.json",
        out.file_name().map_or_else(|| command.to_string(), |n| n.to_string_lossy().into_owned())
    );
    Outputs::new(dir, command, name)
}

fn input_name(path: &Path) -> String {
    path.display().to_string()
}

fn load_labels(path: &Path, m: &mut Manifest) -> Result<Vec<DatedLabel>> {
    let bytes = p::read_input(path)?;
    m.input(input_name(path), &bytes);
    read_labels(bytes.as_slice())
}

fn roster(path: &Path, m: &mut Manifest) -> Result<Roster> {
    p::load_roster(path, m, &input_name(path))
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// Pipeline configuration naming the outlets, roster and keywords.
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Corpus file to write (JSON lines).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn ingest(args: &IngestArgs) -> Result<Vec<PathBuf>> {
    let cfg = PipelineConfig::load(&args.config)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let mut out = outputs_for(&args.out, "ingest");
    let roster = p::load_roster(&cfg.roster, &mut out.manifest, &p::display_rel(&cfg.roster, base))?;
    let text = text_options(&cfg);
    let stopwords = text.stopwords(&mut out.manifest, base)?;
    let window = args.range.window()?.unwrap_or_else(|| cfg.window());
    args.range.record(&mut out.manifest);
    p::hash_outlet_pages(&cfg.outlets, &mut out.manifest, base)?;
    let report = p::run_ingest(&IngestInputs {
        outlets: &cfg.outlets,
        window,
        roster: &roster,
        keywords: &cfg.context_keywords,
        relevance_window: cfg.params.relevance_window,
        stopwords: &stopwords,
    })?;
    let mut log = args.out.clone().into_os_string();
    log.push(".log.csv");
    out.add(&args.out, p::corpus_bytes(&report.articles));
    out.add(PathBuf::from(log), p::ingest_log_bytes(&report));
    eprintln!(
        "{} articles kept, {} pages rejected, {} articles dropped",
        report.articles.len(),
        report.rejects.len(),
        report.dropped.len()
    );
    out.commit()
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    /// Corpus file written by `ingest` (JSON lines).
    #[arg(long)]
    pub corpus: PathBuf,
    /// Roster of parties, candidates and constituencies (TOML).
    #[arg(long)]
    pub roster: PathBuf,
    /// External labels (article_id,entity_id,sentiment,confidence) to use
    /// instead of the lexicon classifier.
    #[arg(long)]
    pub external: Option<PathBuf>,
    /// English polarity lexicon (`word,polarity` lines) replacing the bundled one.
    #[arg(long)]
    pub lexicon_en: Option<PathBuf>,
    /// French polarity lexicon replacing the bundled one.
    #[arg(long)]
    pub lexicon_fr: Option<PathBuf>,
    /// English stop-word list replacing the bundled one.
    #[arg(long)]
    pub stopwords_en: Option<PathBuf>,
    /// French stop-word list replacing the bundled one.
    #[arg(long)]
    pub stopwords_fr: Option<PathBuf>,
    /// Stemmer exceptions: `word` (left unstemmed) or `word=stem` per line.
    #[arg(long)]
    pub stem_exceptions: Option<PathBuf>,
    /// Tokens on each side of a mention that count towards its score.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Minimum absolute window score for a non-neutral label.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn classify(args: &ClassifyArgs) -> Result<Vec<PathBuf>> {
    let mut out = outputs_for(&args.out, "classify");
    let roster = roster(&args.roster, &mut out.manifest)?;
    let text = TextOptions {
        lexicon_en: args.lexicon_en.clone(),
        lexicon_fr: args.lexicon_fr.clone(),
        stopwords_en: args.stopwords_en.clone(),
        stopwords_fr: args.stopwords_fr.clone(),
        stem_exceptions: args.stem_exceptions.clone(),
        window: args.window,
        tau: args.tau,
    };
    let classifier = text.classifier(&mut out.manifest, Path::new(""))?;
    let corpus_bytes = p::read_input(&args.corpus)?;
    out.manifest.input(input_name(&args.corpus), &corpus_bytes);
    let corpus = load_corpus(&args.corpus)?;
    for e in &corpus.errors {
        eprintln!("corpus line {}: {}", e.line, e.reason);
    }
    let external = match &args.external {
        Some(path) => {
            let bytes = p::read_input(path)?;
            out.manifest.input(input_name(path), &bytes);
            Some(bytes)
        }
        None => None,
    };
    let labels = p::run_classify(&corpus.articles, &roster, &classifier, external.as_deref())?;
    eprintln!("{} labels", labels.len());
    out.add(&args.out, p::labels_bytes(&labels)?);
    out.commit()
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// Labels file written by `classify`.
    #[arg(long)]
    pub labels: PathBuf,
    /// Roster of parties, candidates and constituencies (TOML).
    #[arg(long)]
    pub roster: PathBuf,
    /// Weekly series CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Baseline week for the cumulative SIS trend, e.g. 2024-W27.
    #[arg(long, requires = "trend_to")]
    pub trend_from: Option<Week>,
    /// Final week for the cumulative SIS trend.
    #[arg(long, requires = "trend_from")]
    pub trend_to: Option<Week>,
}

pub fn score(args: &ScoreArgs) -> Result<Vec<PathBuf>> {
    let mut out = outputs_for(&args.out, "score");
    let roster = roster(&args.roster, &mut out.manifest)?;
    let labels = load_labels(&args.labels, &mut out.manifest)?;
    args.range.record(&mut out.manifest);
    let range = p::series_range(&labels, args.range.window()?)
        .ok_or_else(|| Error::Data("no labels and no --from/--to range to score".into()))?;
    let series = p::run_series(&labels, &roster, range)?;
    out.add(&args.out, p::series_bytes(&series)?);
    if let (Some(from), Some(to)) = (args.trend_from, args.trend_to) {
        if from >= to {
            return Err(Error::Config(format!("--trend-from {from} does not precede --trend-to {to}")));
        }
        let mut path = args.out.clone().into_os_string();
        path.push(".trend.csv");
        out.add(PathBuf::from(path), p::trend_bytes(&series, &roster, from, to));
    }
    out.commit()
}

#[derive(Debug, Clone, Args)]
pub struct BiasArgs {
    /// Labels file written by `classify`.
    #[arg(long)]
    pub labels: PathBuf,
    /// Roster of parties, candidates and constituencies (TOML).
    #[arg(long)]
    pub roster: PathBuf,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Cells with fewer labels than this get bias 0.
    #[arg(long, default_value_t = DEFAULT_MIN_SUPPORT)]
    pub min_support: u64,
    /// Share of labelled articles, oldest first, used to estimate bias.
    #[arg(long, default_value_t = DEFAULT_SPLIT_RATIO)]
    pub split_ratio: f64,
    #[command(flatten)]
    pub range: RangeArgs,
}

pub fn bias(args: &BiasArgs) -> Result<Vec<PathBuf>> {
    check_ratio(args.split_ratio)?;
    let mut out = outputs_for(&args.out, "bias");
    let roster = roster(&args.roster, &mut out.manifest)?;
    let labels = load_labels(&args.labels, &mut out.manifest)?;
    out.manifest.param("min_support", args.min_support);
    out.manifest.param("split_ratio", args.split_ratio);
    args.range.record(&mut out.manifest);
    let window = args.range.window()?.unwrap_or_else(TimeWindow::unbounded);
    let table = p::run_bias(&labels, &roster, &[], window, args.split_ratio, args.min_support)?;
    out.add(&args.out, p::bias_bytes(&table)?);
    out.commit()
}

#[derive(Debug, Clone, Args)]
pub struct ForecastArgs {
    /// Labels file written by `classify`.
    #[arg(long)]
    pub labels: PathBuf,
    /// Roster of parties, candidates and constituencies (TOML).
    #[arg(long)]
    pub roster: PathBuf,
    /// Bias table; without it, scores are used unadjusted.
    #[arg(long)]
    pub bias: Option<PathBuf>,
    /// Seat table CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Per-party scores behind each allocation.
    #[arg(long)]
    pub detail: Option<PathBuf>,
    /// SVG bar chart of the seat totals.
    #[arg(long)]
    pub chart: Option<PathBuf>,
    #[command(flatten)]
    pub range: RangeArgs,
}

pub fn forecast(args: &ForecastArgs) -> Result<Vec<PathBuf>> {
    let mut out = outputs_for(&args.out, "forecast");
    let roster = roster(&args.roster, &mut out.manifest)?;
    let labels = load_labels(&args.labels, &mut out.manifest)?;
    let bias = match &args.bias {
        Some(path) => {
            let bytes = p::read_input(path)?;
            out.manifest.input(input_name(path), &bytes);
            read_bias(bytes.as_slice())?
        }
        None => Default::default(),
    };
    args.range.record(&mut out.manifest);
    let window = args.range.window()?.unwrap_or_else(TimeWindow::unbounded);
    let forecast = p::run_forecast(&labels, &bias, &roster, window)?;
    let files = p::forecast_files(&forecast, &roster)?;
    print!("{}", String::from_utf8_lossy(&files.table));
    out.add(&args.out, files.table);
    if let Some(path) = &args.detail {
        out.add(path, files.detail);
    }
    if let Some(path) = &args.chart {
        out.add(path, files.chart);
    }
    out.commit()
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Labels file produced by `classify`.
    #[arg(long)]
    pub predicted: PathBuf,
    /// Reference labels (article_id,entity_id,sentiment,confidence).
    #[arg(long)]
    pub gold: PathBuf,
    /// Roster of parties, candidates and constituencies (TOML).
    #[arg(long)]
    pub roster: PathBuf,
    /// Articles to evaluate on: all, the oldest share (train) or the rest (test).
    #[arg(long, value_enum, default_value_t = EvalSplit::All)]
    pub split: EvalSplit,
    /// Share of labelled articles, oldest first, in the training split.
    #[arg(long, default_value_t = DEFAULT_SPLIT_RATIO)]
    pub split_ratio: f64,
    /// JSON report to write; the summary is always printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn evaluate(args: &EvaluateArgs) -> Result<Vec<PathBuf>> {
    check_ratio(args.split_ratio)?;
    let mut m = Manifest::new("evaluate");
    let roster = roster(&args.roster, &mut m)?;
    let predicted = load_labels(&args.predicted, &mut m)?;
    let gold_bytes = p::read_input(&args.gold)?;
    m.input(input_name(&args.gold), &gold_bytes);
    let gold = parse_external_labels(gold_bytes.as_slice(), &roster)?;
    for r in &gold.rejected {
        eprintln!("gold labels line {}: {}", r.line, r.reason);
    }
    let report = p::run_evaluate(&predicted, &gold.labels, args.split, args.split_ratio)?;
    print!("{}", p::evaluation_text(&report));
    let Some(path) = &args.out else {
        return Ok(Vec::new());
    };
    let mut out = outputs_for(path, "evaluate");
    out.manifest = m;
    out.manifest.param("split_ratio", args.split_ratio);
    out.add(path, p::evaluation_bytes(&report, args.split));
    out.commit()
}

fn text_options(cfg: &PipelineConfig) -> TextOptions {
    TextOptions {
        lexicon_en: cfg.text.lexicon_en.clone(),
        lexicon_fr: cfg.text.lexicon_fr.clone(),
        stopwords_en: cfg.text.stopwords_en.clone(),
        stopwords_fr: cfg.text.stopwords_fr.clone(),
        stem_exceptions: cfg.text.stem_exceptions.clone(),
        window: cfg.params.window,
        tau: cfg.params.tau,
    }
}

#[derive(Debug, Clone, Args)]
pub struct AllArgs {
    /// Pipeline configuration file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `output_dir` from the configuration.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Every stage end to end. Nothing is written unless all stages succeed.
pub fn all(args: &AllArgs) -> Result<Vec<PathBuf>> {
    let cfg = PipelineConfig::load(&args.config)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let dir = args.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let mut out = Outputs::new(&dir, "all", "manifest.json");
    let m = &mut out.manifest;

    let roster = p::load_roster(&cfg.roster, m, &p::display_rel(&cfg.roster, base))?;
    let text = text_options(&cfg);
    let classifier = text.classifier(m, base)?;
    let stopwords = text.stopwords(&mut Manifest::default(), base)?;
    let external = read_optional(&cfg.external_labels, m, base)?;
    let gold = read_optional(&cfg.gold_labels, m, base)?;
    p::hash_outlet_pages(&cfg.outlets, m, base)?;

    let window = cfg.window();
    if let Some(r) = cfg.date_range {
        m.param("from", r.from);
        m.param("to", r.to);
    }
    m.param("min_support", cfg.params.min_support);
    m.param("split_ratio", cfg.params.split_ratio);
    m.param("relevance_window", cfg.params.relevance_window);
    m.param("context_keywords", cfg.context_keywords.join(" "));
    m.param("outlets", cfg.outlet_ids().join(" "));

    let report = p::run_ingest(&IngestInputs {
        outlets: &cfg.outlets,
        window,
        roster: &roster,
        keywords: &cfg.context_keywords,
        relevance_window: cfg.params.relevance_window,
        stopwords: &stopwords,
    })?;
    eprintln!(
        "ingest: {} articles kept, {} pages rejected, {} articles dropped",
        report.articles.len(),
        report.rejects.len(),
        report.dropped.len()
    );

    let labels = p::run_classify(&report.articles, &roster, &classifier, external.as_deref())?;
    eprintln!("classify: {} labels", labels.len());

    let bias = p::run_bias(
        &labels,
        &roster,
        &cfg.outlet_ids(),
        window,
        cfg.params.split_ratio,
        cfg.params.min_support,
    )?;

    let series = match p::series_range(&labels, cfg.date_range.map(|r| r.window())) {
        Some(range) => p::run_series(&labels, &roster, range)?,
        None => Vec::new(),
    };

    let forecast = p::run_forecast(&labels, &bias, &roster, window)?;
    let files = p::forecast_files(&forecast, &roster)?;
    print!("{}", String::from_utf8_lossy(&files.table));

    let evaluation = match &gold {
        Some(bytes) => {
            let gold = parse_external_labels(bytes.as_slice(), &roster)?;
            for r in &gold.rejected {
                eprintln!("gold labels line {}: {}", r.line, r.reason);
            }
            let report = p::run_evaluate(&labels, &gold.labels, EvalSplit::Test, cfg.params.split_ratio)?;
            eprint!("{}", p::evaluation_text(&report));
            Some(p::evaluation_bytes(&report, EvalSplit::Test))
        }
        None => None,
    };

    out.add(dir.join("corpus.jsonl"), p::corpus_bytes(&report.articles));
    out.add(dir.join("ingest_log.csv"), p::ingest_log_bytes(&report));
    out.add(dir.join("labels.csv"), p::labels_bytes(&labels)?);
    out.add(dir.join("bias.csv"), p::bias_bytes(&bias)?);
    out.add(dir.join("series.csv"), p::series_bytes(&series)?);
    if let Some(t) = cfg.trend {
        out.add(dir.join("trend.csv"), p::trend_bytes(&series, &roster, t.from, t.to));
    }
    out.add(dir.join("forecast.csv"), files.table);
    out.add(dir.join("forecast_detail.csv"), files.detail);
    out.add(dir.join("forecast.svg"), files.chart);
    if let Some(bytes) = evaluation {
        out.add(dir.join("evaluation.json"), bytes);
    }
    out.commit()
}

fn read_optional(path: &Option<PathBuf>, m: &mut Manifest, base: &Path) -> Result<Option<Vec<u8>>> {
    match path {
        Some(p) => {
            let bytes =
                std::fs::read(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            m.input(p::display_rel(p, base), &bytes);
            Ok(Some(bytes))
        }
        None => Ok(None),
    }
}
