//! Label CSV files.
//!
//! External labels carry `article_id,entity_id,sentiment,confidence`. The
//! pipeline's own label file adds `source,outlet,published_at` so later
//! stages do not need the corpus.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use log::warn;

use super::{DatedLabel, EntityLabel, LabelSource, Sentiment};
use crate::error::{Error, Result};
use crate::ingest::{utc_seconds, Article};
use crate::roster::Roster;

const EXTERNAL_HEADER: [&str; 4] = ["article_id", "entity_id", "sentiment", "confidence"];
const LABEL_HEADER: [&str; 7] =
    ["article_id", "entity_id", "sentiment", "confidence", "source", "outlet", "published_at"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based line number, counting the header.
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Default)]
pub struct ImportReport {
    pub labels: Vec<EntityLabel>,
    pub rejected: Vec<RowError>,
}

fn check_header(rdr: &mut csv::Reader<impl Read>, want: &[&str], what: &str) -> Result<()> {
    let header = rdr.headers().map_err(|e| Error::Data(format!("{what}: {e}")))?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != want {
        return Err(Error::Data(format!(
            "{what}: expected header `{}`, found `{}`",
            want.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

fn parse_confidence(raw: &str) -> std::result::Result<f64, String> {
    let c: f64 = raw.trim().parse().map_err(|_| format!("confidence `{raw}` is not a number"))?;
    if !(0.0..=1.0).contains(&c) {
        return Err(format!("confidence {c} is outside [0, 1]"));
    }
    Ok(c)
}

/// Parses externally produced labels. Bad rows are collected, not fatal;
/// for duplicate (article, entity) keys the last row wins.
pub fn parse_external_labels(reader: impl Read, roster: &Roster) -> Result<ImportReport> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    check_header(&mut rdr, &EXTERNAL_HEADER, "external labels")?;
    let mut report = ImportReport::default();
    let mut by_key: BTreeMap<(String, String), EntityLabel> = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let row = rec.map_err(|e| e.to_string()).and_then(|r| {
            if r.len() != 4 {
                return Err(format!("expected 4 fields, found {}", r.len()));
            }
            let entity_id = r[1].trim().to_string();
            if roster.entity(&entity_id).is_none() {
                return Err(format!("unknown entity `{entity_id}`"));
            }
            Ok(EntityLabel {
                article_id: r[0].trim().to_string(),
                entity_id,
                sentiment: r[2].parse()?,
                confidence: parse_confidence(&r[3])?,
                source: LabelSource::External,
            })
        });
        match row {
            Ok(label) => {
                if by_key.insert(label.key(), label.clone()).is_some() {
                    warn!(
                        "external labels line {line}: duplicate ({}, {}), keeping the later row",
                        label.article_id, label.entity_id
                    );
                }
            }
            Err(reason) => {
                warn!("external labels line {line}: {reason}; row rejected");
                report.rejected.push(RowError { line, reason });
            }
        }
    }
    report.labels = by_key.into_values().collect();
    Ok(report)
}

pub fn import_external_labels(path: &Path, roster: &Roster) -> Result<ImportReport> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_external_labels(file, roster)
}

/// Joins labels with their articles. Labels whose article is absent from
/// the corpus are returned separately.
pub fn attach_articles(
    labels: Vec<EntityLabel>,
    articles: &[Article],
) -> (Vec<DatedLabel>, Vec<EntityLabel>) {
    let index: HashMap<&str, &Article> = articles.iter().map(|a| (a.id.as_str(), a)).collect();
    let mut dated = Vec::new();
    let mut orphans = Vec::new();
    for label in labels {
        match index.get(label.article_id.as_str()) {
            Some(a) => {
                dated.push(DatedLabel { outlet: a.outlet.clone(), published_at: a.published_at, label })
            }
            None => orphans.push(label),
        }
    }
    (dated, orphans)
}

/// Writes labels sorted by (article, entity).
pub fn write_labels(out: impl Write, labels: &[DatedLabel]) -> Result<()> {
    let mut sorted: Vec<&DatedLabel> = labels.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.label.article_id, &a.label.entity_id).cmp(&(&b.label.article_id, &b.label.entity_id))
    });
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| Error::Data(format!("writing labels: {e}"));
    w.write_record(LABEL_HEADER).map_err(to_err)?;
    for d in sorted {
        let l = &d.label;
        w.write_record([
            l.article_id.as_str(),
            l.entity_id.as_str(),
            l.sentiment.word(),
            &l.confidence.to_string(),
            &l.source.to_string(),
            d.outlet.as_str(),
            &utc_seconds::format(d.published_at),
        ])
        .map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::Data(format!("writing labels: {e}")))?;
    Ok(())
}

/// Reads a label file written by [`write_labels`]. Any malformed row is an
/// input-data error.
pub fn read_labels(reader: impl Read) -> Result<Vec<DatedLabel>> {
    let mut rdr = csv::Reader::from_reader(reader);
    check_header(&mut rdr, &LABEL_HEADER, "labels")?;
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let bad = |m: String| Error::Data(format!("labels line {line}: {m}"));
        let r = rec.map_err(|e| bad(e.to_string()))?;
        let label = EntityLabel {
            article_id: r[0].to_string(),
            entity_id: r[1].to_string(),
            sentiment: r[2].parse::<Sentiment>().map_err(bad)?,
            confidence: parse_confidence(&r[3]).map_err(bad)?,
            source: r[4].parse().map_err(bad)?,
        };
        if !seen.insert(label.key()) {
            return Err(bad(format!("duplicate label for ({}, {})", label.article_id, label.entity_id)));
        }
        out.push(DatedLabel {
            outlet: r[5].to_string(),
            published_at: utc_seconds::parse(&r[6]).map_err(bad)?,
            label,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster() -> Roster {
        Roster::parse(
            r#"
            [[party]]
            id = "a"
            name = "A"
            [[party]]
            id = "b"
            name = "B"
            [[entity]]
            id = "e1"
            name = "One"
            party = "a"
            aliases = ["One"]
            "#,
        )
        .unwrap()
    }

    fn import(body: &str) -> ImportReport {
        let csv = format!("article_id,entity_id,sentiment,confidence\n{body}");
        parse_external_labels(csv.as_bytes(), &roster()).unwrap()
    }

    #[test]
    fn single_positive_row() {
        let r = import("a1,e1,positive,0.9\n");
        assert_eq!(r.labels.len(), 1);
        assert_eq!(r.labels[0].sentiment, Sentiment::Pos);
        assert_eq!(r.labels[0].source, LabelSource::External);
        assert!(r.rejected.is_empty());
    }

    #[test]
    fn bad_rows_rejected() {
        let r = import("a1,e1,meh,0.5\na2,zz,positive,0.5\na3,e1,NEGATIVE,1.5\na4,e1,Negative,1\n");
        assert_eq!(r.labels.len(), 1);
        assert_eq!(r.labels[0].article_id, "a4");
        let lines: Vec<u64> = r.rejected.iter().map(|e| e.line).collect();
        assert_eq!(lines, [2, 3, 4]);
    }

    #[test]
    fn duplicate_last_wins() {
        let r = import("a1,e1,neutral,0.5\na1,e1,positive,0.7\n");
        assert_eq!(r.labels.len(), 1);
        assert_eq!(r.labels[0].sentiment, Sentiment::Pos);
    }

    #[test]
    fn wrong_header_is_fatal() {
        let res = parse_external_labels("a,b,c,d\n".as_bytes(), &roster());
        assert!(matches!(res, Err(Error::Data(_))));
    }
}
