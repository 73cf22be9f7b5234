//! Corpus acquisition: fetching, entity matching, relevance filtering,
//! deduplication and JSONL persistence.

mod article;
mod corpus;
mod dedup;
pub mod fetch;
mod matching;

pub use article::{content_id, normalize_for_id, sha256_hex, Article};
pub use corpus::{
    load_corpus, parse_corpus, save_corpus, write_corpus, CorpusManifest, LineError, LoadedCorpus,
};
pub use dedup::deduplicate;
pub use fetch::{fetch_outlet, OutletConfig, RawDocument, Reject, RejectReason};
pub use matching::{
    find_sequence, folded_words, match_entities, mention_spans, relevance_filter, ContextKeywords,
    DropReason, Relevance, DEFAULT_RELEVANCE_WINDOW,
};

pub use article::utc_seconds;

use crate::error::Result;
use crate::roster::EntityDef;
use crate::text::{clean_text, detect_language, StopWords};
use crate::window::TimeWindow;

#[derive(Debug, Clone)]
pub struct IngestSettings<'a> {
    pub outlets: &'a [OutletConfig],
    pub window: TimeWindow,
    pub entities: &'a [EntityDef],
    pub keywords: ContextKeywords,
    pub relevance_window: usize,
    pub stopwords: &'a StopWords,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dropped {
    pub article_id: String,
    pub url: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct IngestReport {
    pub articles: Vec<Article>,
    pub rejects: Vec<Reject>,
    pub dropped: Vec<Dropped>,
}

/// Turns an extracted document into an article, detecting the language when
/// the outlet does not declare one.
pub fn to_article(
    doc: RawDocument,
    declared: Option<crate::text::Language>,
    stopwords: &StopWords,
) -> Article {
    let language = declared
        .unwrap_or_else(|| detect_language(&clean_text(&format!("{}\n{}", doc.title, doc.body)), stopwords));
    Article::new(doc.outlet, doc.url, doc.published_at, language, doc.title, doc.body)
}

/// Runs fetch → match → relevance → dedup. Outlets are fetched concurrently;
/// everything after fetching runs in config order so output is identical to a
/// sequential run.
pub fn ingest(settings: &IngestSettings<'_>) -> Result<IngestReport> {
    let fetched: Vec<Result<fetch::FetchOutcome>> = std::thread::scope(|scope| {
        let handles: Vec<_> = settings
            .outlets
            .iter()
            .map(|cfg| scope.spawn(move || fetch_outlet(cfg, &settings.window)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("fetch thread panicked")).collect()
    });

    let mut report = IngestReport::default();
    let mut candidates = Vec::new();
    for (cfg, outcome) in settings.outlets.iter().zip(fetched) {
        let outcome = outcome?;
        report.rejects.extend(outcome.rejects);
        for doc in outcome.documents {
            let mut article = to_article(doc, cfg.language, settings.stopwords);
            article.matched_entities = match_entities(&article, settings.entities);
            if article.matched_entities.is_empty() {
                report.dropped.push(Dropped {
                    article_id: article.id,
                    url: article.url,
                    reason: "NO_ENTITY".into(),
                });
                continue;
            }
            match relevance_filter(&article, settings.entities, &settings.keywords, settings.relevance_window)
            {
                Relevance::Keep => candidates.push(article),
                Relevance::Drop(reason) => report.dropped.push(Dropped {
                    article_id: article.id,
                    url: article.url,
                    reason: reason.to_string(),
                }),
            }
        }
    }
    let before: Vec<(String, String)> = candidates.iter().map(|a| (a.id.clone(), a.url.clone())).collect();
    report.articles = deduplicate(candidates);
    let mut kept: std::collections::BTreeSet<(String, String)> =
        report.articles.iter().map(|a| (a.id.clone(), a.url.clone())).collect();
    for (id, url) in before {
        if !kept.remove(&(id.clone(), url.clone())) {
            report.dropped.push(Dropped { article_id: id, url, reason: "DUPLICATE".into() });
        }
    }
    report
        .dropped
        .sort_by(|a, b| (&a.reason, &a.url, &a.article_id).cmp(&(&b.reason, &b.url, &b.article_id)));
    Ok(report)
}
