use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::Serialize;

use super::article::{content_id, Article};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusManifest {
    pub article_count: usize,
    pub date_range: Option<(DateTime<Utc>, DateTime<Utc>)>,
    pub per_outlet_counts: BTreeMap<String, usize>,
}

impl CorpusManifest {
    pub fn from_articles(articles: &[Article]) -> Self {
        let mut per_outlet_counts = BTreeMap::new();
        for a in articles {
            *per_outlet_counts.entry(a.outlet.clone()).or_insert(0) += 1;
        }
        let min = articles.iter().map(|a| a.published_at).min();
        let max = articles.iter().map(|a| a.published_at).max();
        Self { article_count: articles.len(), date_range: min.zip(max), per_outlet_counts }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub articles: Vec<Article>,
    pub manifest: CorpusManifest,
    pub errors: Vec<LineError>,
}

pub fn write_corpus<W: Write>(mut out: W, articles: &[Article]) -> std::io::Result<()> {
    for a in articles {
        serde_json::to_writer(&mut out, a)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn save_corpus(path: &Path, articles: &[Article]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_corpus(BufWriter::new(file), articles).map_err(|e| Error::io(path, e))
}

fn validate(a: &Article) -> std::result::Result<(), String> {
    if a.id.is_empty() {
        return Err("empty id".into());
    }
    if a.body.trim().is_empty() {
        return Err("empty body".into());
    }
    let expected = content_id(&a.title, &a.body);
    if a.id != expected {
        return Err(format!("id `{}` does not match content hash `{expected}`", a.id));
    }
    Ok(())
}

/// Parses JSONL text. Malformed or invalid lines are reported with their
/// 1-based line number and skipped; blank lines are ignored.
pub fn parse_corpus<R: BufRead>(reader: R) -> std::io::Result<LoadedCorpus> {
    let mut articles = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(e) => {
                errors.push(LineError { line: lineno, reason: format!("malformed JSON: {e}") });
                continue;
            }
        };
        match serde_json::from_value::<Article>(value) {
            Ok(a) => match validate(&a) {
                Ok(()) => articles.push(a),
                Err(reason) => {
                    errors.push(LineError { line: lineno, reason: format!("schema violation: {reason}") })
                }
            },
            Err(e) => errors.push(LineError { line: lineno, reason: format!("schema violation: {e}") }),
        }
    }
    let manifest = CorpusManifest::from_articles(&articles);
    Ok(LoadedCorpus { articles, manifest, errors })
}

pub fn load_corpus(path: &Path) -> Result<LoadedCorpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(BufReader::new(file)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use chrono::TimeZone;

    use super::*;
    use crate::text::Language;

    fn sample(n: usize) -> Vec<Article> {
        (0..n)
            .map(|i| {
                let t = Utc.with_ymd_and_hms(2024, 2, 1 + i as u32, 9, 0, 0).unwrap();
                let outlet = if i % 2 == 0 { "defimedia" } else { "lexpress" };
                Article::new(
                    outlet,
                    format!("https://n/{i}"),
                    t,
                    Language::Fr,
                    format!("T{i}"),
                    format!("corps {i}"),
                )
            })
            .collect()
    }

    #[test]
    fn empty_input() {
        let c = parse_corpus("".as_bytes()).unwrap();
        assert!(c.articles.is_empty());
        assert_eq!(c.manifest.article_count, 0);
        assert_eq!(c.manifest.date_range, None);
    }

    #[test]
    fn manifest_counts_sum() {
        let mut buf = Vec::new();
        write_corpus(&mut buf, &sample(5)).unwrap();
        let c = parse_corpus(buf.as_slice()).unwrap();
        assert_eq!(c.manifest.article_count, 5);
        assert_eq!(c.manifest.per_outlet_counts.values().sum::<usize>(), 5);
        assert!(c.errors.is_empty());
    }

    #[test]
    fn bad_lines_are_recorded() {
        let mut buf = Vec::new();
        write_corpus(&mut buf, &sample(1)).unwrap();
        let good = String::from_utf8(buf).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(good.trim()).unwrap();
        v.as_object_mut().unwrap().remove("published_at");
        let text = format!("{good}{v}\n{{not json\n");
        let c = parse_corpus(text.as_bytes()).unwrap();
        assert_eq!(c.articles.len(), 1);
        assert_eq!(c.errors.len(), 2);
        assert_eq!(c.errors[0].line, 2);
        assert!(c.errors[0].reason.contains("published_at"));
        assert!(c.errors[1].reason.starts_with("malformed JSON"));
    }

    #[test]
    fn tampered_id_is_rejected() {
        let mut a = sample(1).remove(0);
        a.id = "abc".into();
        let mut buf = Vec::new();
        write_corpus(&mut buf, &[a]).unwrap();
        let c = parse_corpus(buf.as_slice()).unwrap();
        assert!(c.articles.is_empty());
        assert!(c.errors[0].reason.contains("content hash"));
    }
}
