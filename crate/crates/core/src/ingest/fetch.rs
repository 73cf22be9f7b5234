//! Outlet fetching and article extraction.
//!
//! An outlet is either a local directory of saved HTML pages or a website
//! reached through listing pages and/or explicit article URLs. Extraction is
//! selector driven; documents that cannot be extracted become rejects with a
//! reason instead of aborting the run.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use chrono::{DateTime, FixedOffset, NaiveDate, NaiveDateTime, TimeZone, Utc};
use regex::Regex;
use scraper::{ElementRef, Html, Node, Selector};
use serde::Deserialize;

use super::article::truncate_to_second;
use crate::error::{Error, Result};
use crate::text::Language;
use crate::window::TimeWindow;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutletConfig {
    pub id: String,
    #[serde(default)]
    pub local_dir: Option<PathBuf>,
    #[serde(default)]
    pub base_url: Option<String>,
    /// Listing pages, relative to `base_url`, whose links are followed.
    #[serde(default)]
    pub index_paths: Vec<String>,
    #[serde(default)]
    pub urls: Vec<String>,
    #[serde(default = "default_link_selector")]
    pub link_selector: String,
    #[serde(default = "default_title_selector")]
    pub title_selector: String,
    /// When unset, paragraphs outside navigation and boilerplate are used.
    #[serde(default)]
    pub body_selector: Option<String>,
    #[serde(default = "default_date_selector")]
    pub date_selector: String,
    /// Read the date from this attribute instead of the element text.
    #[serde(default)]
    pub date_attribute: Option<String>,
    /// chrono format strings tried after ISO-8601. French month and day
    /// names are accepted wherever `%B`/`%A` appear.
    #[serde(default)]
    pub date_formats: Vec<String>,
    /// Offset applied to dates that carry no zone.
    #[serde(default)]
    pub utc_offset_minutes: i32,
    #[serde(default)]
    pub language: Option<Language>,
    #[serde(default = "default_rps")]
    pub requests_per_second: f64,
}

fn default_link_selector() -> String {
    "a[href]".into()
}
fn default_title_selector() -> String {
    "h1".into()
}
fn default_date_selector() -> String {
    "time".into()
}
fn default_rps() -> f64 {
    1.0
}

impl OutletConfig {
    /// A local-directory outlet with default selectors.
    pub fn local(id: impl Into<String>, dir: impl Into<PathBuf>) -> Self {
        Self {
            id: id.into(),
            local_dir: Some(dir.into()),
            base_url: None,
            index_paths: Vec::new(),
            urls: Vec::new(),
            link_selector: default_link_selector(),
            title_selector: default_title_selector(),
            body_selector: None,
            date_selector: default_date_selector(),
            date_attribute: None,
            date_formats: Vec::new(),
            utc_offset_minutes: 0,
            language: None,
            requests_per_second: default_rps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub outlet: String,
    pub url: String,
    pub title: String,
    pub body: String,
    pub published_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    DateUnparseable,
    MissingTitle,
    EmptyBody,
    OutOfRange,
    Fetch(String),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::DateUnparseable => f.write_str("DATE_UNPARSEABLE"),
            RejectReason::MissingTitle => f.write_str("MISSING_TITLE"),
            RejectReason::EmptyBody => f.write_str("EMPTY_BODY"),
            RejectReason::OutOfRange => f.write_str("OUT_OF_RANGE"),
            RejectReason::Fetch(msg) => write!(f, "FETCH_FAILED: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub outlet: String,
    pub source: String,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default)]
pub struct FetchOutcome {
    pub documents: Vec<RawDocument>,
    pub rejects: Vec<Reject>,
}

/// Where page bodies come from; the HTTP implementation rate-limits itself.
pub trait PageSource {
    fn get(&mut self, url: &str) -> std::result::Result<String, String>;
}

pub struct HttpSource {
    agent: ureq::Agent,
    min_interval: Duration,
    last_request: Option<Instant>,
}

impl HttpSource {
    pub fn new(requests_per_second: f64) -> Self {
        Self {
            agent: ureq::AgentBuilder::new()
                .timeout(Duration::from_secs(30))
                .user_agent(concat!("seatcast/", env!("CARGO_PKG_VERSION")))
                .build(),
            min_interval: Duration::from_secs_f64(1.0 / requests_per_second),
            last_request: None,
        }
    }
}

impl PageSource for HttpSource {
    fn get(&mut self, url: &str) -> std::result::Result<String, String> {
        if let Some(last) = self.last_request {
            let elapsed = last.elapsed();
            if elapsed < self.min_interval {
                std::thread::sleep(self.min_interval - elapsed);
            }
        }
        self.last_request = Some(Instant::now());
        self.agent.get(url).call().map_err(|e| e.to_string())?.into_string().map_err(|e| e.to_string())
    }
}

/// Selectors of an outlet, parsed once.
pub struct Extractor {
    outlet: String,
    title: Selector,
    body: Option<Selector>,
    date: Selector,
    link: Selector,
    date_attribute: Option<String>,
    date_formats: Vec<String>,
    offset: FixedOffset,
}

fn selector(s: &str, outlet: &str) -> Result<Selector> {
    Selector::parse(s).map_err(|e| Error::Config(format!("outlet `{outlet}`: bad selector `{s}`: {e}")))
}

impl Extractor {
    pub fn new(cfg: &OutletConfig) -> Result<Self> {
        let offset = FixedOffset::east_opt(cfg.utc_offset_minutes * 60)
            .ok_or_else(|| Error::Config(format!("outlet `{}`: utc_offset_minutes out of range", cfg.id)))?;
        Ok(Self {
            outlet: cfg.id.clone(),
            title: selector(&cfg.title_selector, &cfg.id)?,
            body: cfg.body_selector.as_deref().map(|s| selector(s, &cfg.id)).transpose()?,
            date: selector(&cfg.date_selector, &cfg.id)?,
            link: selector(&cfg.link_selector, &cfg.id)?,
            date_attribute: cfg.date_attribute.clone(),
            date_formats: cfg.date_formats.clone(),
            offset,
        })
    }

    pub fn extract(&self, html: &str, url: &str) -> std::result::Result<RawDocument, RejectReason> {
        let doc = Html::parse_document(html);
        let title = doc
            .select(&self.title)
            .next()
            .map(|e| squash(&e.text().collect::<String>()))
            .filter(|t| !t.is_empty())
            .ok_or(RejectReason::MissingTitle)?;
        let raw_date = doc
            .select(&self.date)
            .next()
            .and_then(|e| match &self.date_attribute {
                Some(attr) => e.value().attr(attr).map(str::to_string),
                None => Some(e.text().collect()),
            })
            .ok_or(RejectReason::DateUnparseable)?;
        let published_at =
            parse_date(&raw_date, &self.date_formats, self.offset).ok_or(RejectReason::DateUnparseable)?;
        let body = match &self.body {
            Some(sel) => {
                doc.select(sel).map(collect_text).filter(|t| !t.is_empty()).collect::<Vec<_>>().join("\n")
            }
            None => fallback_body(&doc),
        };
        if body.trim().is_empty() {
            return Err(RejectReason::EmptyBody);
        }
        let url = canonical_url(&doc).unwrap_or_else(|| url.to_string());
        Ok(RawDocument { outlet: self.outlet.clone(), url, title, body, published_at })
    }

    /// Absolute article links found on a listing page.
    pub fn links(&self, html: &str, page_url: &str) -> Vec<String> {
        let doc = Html::parse_document(html);
        let base = url::Url::parse(page_url).ok();
        let mut out: Vec<String> = Vec::new();
        for a in doc.select(&self.link) {
            let Some(href) = a.value().attr("href") else { continue };
            let resolved = match &base {
                Some(b) => b.join(href).map(|u| u.to_string()).ok(),
                None => Some(href.to_string()),
            };
            if let Some(u) = resolved {
                if !out.contains(&u) {
                    out.push(u);
                }
            }
        }
        out
    }
}

const SKIP_TAGS: &[&str] = &[
    "script", "style", "nav", "header", "footer", "aside", "form", "noscript", "button", "iframe",
    "template", "menu", "select",
];
const BOILERPLATE_MARKERS: &[&str] = &[
    "nav",
    "navbar",
    "menu",
    "breadcrumb",
    "breadcrumbs",
    "share",
    "social",
    "related",
    "comment",
    "comments",
    "advert",
    "ads",
    "ad",
    "newsletter",
    "cookie",
    "sidebar",
];
const BLOCK_TAGS: &[&str] = &[
    "p",
    "div",
    "br",
    "li",
    "ul",
    "ol",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "blockquote",
    "section",
    "article",
    "tr",
    "table",
];

fn is_boilerplate(el: &scraper::node::Element) -> bool {
    if SKIP_TAGS.contains(&el.name()) {
        return true;
    }
    let marked = |v: Option<&str>| {
        v.is_some_and(|v| {
            v.split(|c: char| c.is_whitespace() || c == '-' || c == '_')
                .any(|tok| BOILERPLATE_MARKERS.contains(&tok.to_ascii_lowercase().as_str()))
        })
    };
    marked(el.attr("class")) || marked(el.attr("id"))
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn collect_into(node: ego_tree::NodeRef<'_, Node>, out: &mut String) {
    for child in node.children() {
        match child.value() {
            Node::Text(t) => out.push_str(t),
            Node::Element(el) => {
                if is_boilerplate(el) {
                    continue;
                }
                let block = BLOCK_TAGS.contains(&el.name());
                if block {
                    out.push('\n');
                }
                collect_into(child, out);
                if block {
                    out.push('\n');
                }
            }
            _ => {}
        }
    }
}

/// Visible text under an element, one line per block, boilerplate skipped.
pub fn collect_text(el: ElementRef<'_>) -> String {
    let mut raw = String::new();
    collect_into(*el, &mut raw);
    raw.lines().map(squash).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("\n")
}

fn fallback_body(doc: &Html) -> String {
    static P: LazyLock<Selector> = LazyLock::new(|| Selector::parse("p").unwrap());
    doc.select(&P)
        .filter(|p| p.ancestors().filter_map(|n| n.value().as_element()).all(|el| !is_boilerplate(el)))
        .map(collect_text)
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

fn canonical_url(doc: &Html) -> Option<String> {
    static CANON: LazyLock<Selector> = LazyLock::new(|| Selector::parse(r#"link[rel="canonical"]"#).unwrap());
    doc.select(&CANON).next().and_then(|e| e.value().attr("href")).map(str::to_string)
}

const FRENCH_NAMES: &[(&str, &str)] = &[
    ("janvier", "January"),
    ("fevrier", "February"),
    ("mars", "March"),
    ("avril", "April"),
    ("mai", "May"),
    ("juin", "June"),
    ("juillet", "July"),
    ("aout", "August"),
    ("septembre", "September"),
    ("octobre", "October"),
    ("novembre", "November"),
    ("decembre", "December"),
    ("lundi", "Monday"),
    ("mardi", "Tuesday"),
    ("mercredi", "Wednesday"),
    ("jeudi", "Thursday"),
    ("vendredi", "Friday"),
    ("samedi", "Saturday"),
    ("dimanche", "Sunday"),
    ("1er", "1"),
];

static WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[\p{L}\d]+").unwrap());

fn anglicize(raw: &str) -> String {
    let folded = crate::text::fold(raw);
    WORD.replace_all(&folded, |caps: &regex::Captures<'_>| {
        let w = &caps[0];
        FRENCH_NAMES.iter().find(|(fr, _)| *fr == w).map_or_else(|| w.to_string(), |(_, en)| en.to_string())
    })
    .into_owned()
}

/// Parses a publication date: ISO-8601/RFC 3339 first, then each configured
/// format as a datetime and as a bare date (midnight). Zone-less values are
/// read in `offset` and converted to UTC.
pub fn parse_date(raw: &str, formats: &[String], offset: FixedOffset) -> Option<DateTime<Utc>> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    let local = |n: NaiveDateTime| {
        offset.from_local_datetime(&n).single().map(|t| truncate_to_second(t.with_timezone(&Utc)))
    };
    if let Ok(t) = DateTime::parse_from_rfc3339(raw) {
        return Some(truncate_to_second(t.with_timezone(&Utc)));
    }
    for iso in ["%Y-%m-%dT%H:%M:%S%.f%z", "%Y-%m-%d %H:%M:%S%z"] {
        if let Ok(t) = DateTime::parse_from_str(raw, iso) {
            return Some(truncate_to_second(t.with_timezone(&Utc)));
        }
    }
    for iso in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"] {
        if let Ok(n) = NaiveDateTime::parse_from_str(raw, iso) {
            return local(n);
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(raw, "%Y-%m-%d") {
        return local(d.and_hms_opt(0, 0, 0)?);
    }
    let english = anglicize(raw);
    for fmt in formats {
        for candidate in [raw, english.as_str()] {
            if let Ok(t) = DateTime::parse_from_str(candidate, fmt) {
                return Some(truncate_to_second(t.with_timezone(&Utc)));
            }
            if let Ok(n) = NaiveDateTime::parse_from_str(candidate, fmt) {
                return local(n);
            }
            if let Ok(d) = NaiveDate::parse_from_str(candidate, fmt) {
                return local(d.and_hms_opt(0, 0, 0)?);
            }
        }
    }
    None
}

struct LocalDirSource;

impl PageSource for LocalDirSource {
    fn get(&mut self, path: &str) -> std::result::Result<String, String> {
        std::fs::read_to_string(path).map_err(|e| e.to_string())
    }
}

fn list_html(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Error::Config(format!("cannot read outlet directory {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|x| x.to_str())
                    .is_some_and(|x| x.eq_ignore_ascii_case("html") || x.eq_ignore_ascii_case("htm"))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Fetches and extracts every document of one outlet published inside `window`.
pub fn fetch_outlet(cfg: &OutletConfig, window: &TimeWindow) -> Result<FetchOutcome> {
    if cfg.requests_per_second <= 0.0 || !cfg.requests_per_second.is_finite() {
        return Err(Error::Config(format!("outlet `{}`: requests_per_second must be positive", cfg.id)));
    }
    match (&cfg.local_dir, &cfg.base_url, cfg.urls.is_empty()) {
        (Some(_), None, true) => fetch_outlet_with(cfg, window, &mut LocalDirSource),
        (None, _, _) if cfg.base_url.is_some() || !cfg.urls.is_empty() => {
            fetch_outlet_with(cfg, window, &mut HttpSource::new(cfg.requests_per_second))
        }
        _ => Err(Error::Config(format!("outlet `{}` needs either local_dir or base_url/urls", cfg.id))),
    }
}

/// As [`fetch_outlet`] with an explicit page source.
pub fn fetch_outlet_with(
    cfg: &OutletConfig,
    window: &TimeWindow,
    source: &mut dyn PageSource,
) -> Result<FetchOutcome> {
    let extractor = Extractor::new(cfg)?;
    let mut outcome = FetchOutcome::default();
    let reject = |source: String, reason| Reject { outlet: cfg.id.clone(), source, reason };

    // (address handed to the source, label used when no canonical link exists)
    let targets: Vec<(String, String)> = if let Some(dir) = &cfg.local_dir {
        list_html(dir)?
            .into_iter()
            .map(|p| {
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                (p.to_string_lossy().into_owned(), format!("local://{}/{name}", cfg.id))
            })
            .collect()
    } else {
        let base = cfg.base_url.as_deref().and_then(|b| url::Url::parse(b).ok());
        let mut urls: Vec<String> = cfg.urls.clone();
        for index in &cfg.index_paths {
            let page = match &base {
                Some(b) => b.join(index).map(|u| u.to_string()).unwrap_or_else(|_| index.clone()),
                None => index.clone(),
            };
            match source.get(&page) {
                Ok(html) => {
                    for link in extractor.links(&html, &page) {
                        if !urls.contains(&link) {
                            urls.push(link);
                        }
                    }
                }
                Err(e) => outcome.rejects.push(reject(page, RejectReason::Fetch(e))),
            }
        }
        urls.into_iter().map(|u| (u.clone(), u)).collect()
    };

    for (address, label) in targets {
        let html = match source.get(&address) {
            Ok(h) => h,
            Err(e) => {
                outcome.rejects.push(reject(label, RejectReason::Fetch(e)));
                continue;
            }
        };
        match extractor.extract(&html, &label) {
            Ok(doc) if window.contains(doc.published_at) => outcome.documents.push(doc),
            Ok(doc) => outcome.rejects.push(reject(doc.url, RejectReason::OutOfRange)),
            Err(reason) => outcome.rejects.push(reject(label, reason)),
        }
    }
    Ok(outcome)
}
