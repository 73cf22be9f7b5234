//! Per-outlet, per-entity sentiment bias and its removal.
//!
//! The bias of outlet o toward entity e is o's score for e minus the pooled
//! score for e. Only (o, e) cells with at least `min_support` labels are
//! estimated; the others get bias 0 and are also left out of the pooled
//! reference, so the support-weighted biases of each entity sum to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use log::warn;

use crate::error::{Error, Result};
use crate::scoring::{sis_from_score, Counts, SentimentAggregate};
use crate::sentiment::DatedLabel;
use crate::window::TimeWindow;

pub const DEFAULT_MIN_SUPPORT: u64 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct OutletBias {
    pub outlet_id: String,
    pub entity_id: String,
    pub bias: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BiasTable {
    entries: BTreeMap<(String, String), OutletBias>,
}

impl BiasTable {
    pub fn from_entries(entries: impl IntoIterator<Item = OutletBias>) -> Self {
        Self {
            entries: entries.into_iter().map(|b| ((b.outlet_id.clone(), b.entity_id.clone()), b)).collect(),
        }
    }

    pub fn get(&self, outlet: &str, entity: &str) -> Option<&OutletBias> {
        self.entries.get(&(outlet.to_string(), entity.to_string()))
    }

    /// Entries ordered by (outlet, entity).
    pub fn entries(&self) -> impl Iterator<Item = &OutletBias> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Estimates bias for every (outlet, entity) pair from labels inside `window`.
pub fn identify_bias(
    labels: &[DatedLabel],
    outlets: &[String],
    entities: &[String],
    window: TimeWindow,
    min_support: u64,
) -> BiasTable {
    let outlets: BTreeSet<&String> = outlets.iter().collect();
    let entities: BTreeSet<&String> = entities.iter().collect();
    let mut cells: BTreeMap<(&String, &String), Counts> = BTreeMap::new();
    for l in labels {
        let (Some(o), Some(e)) = (outlets.get(&l.outlet), entities.get(&l.label.entity_id)) else {
            continue;
        };
        if window.contains(l.published_at) {
            cells.entry((*e, *o)).or_default().record(l.label.sentiment);
        }
    }

    let mut out = Vec::new();
    for e in &entities {
        let per_outlet: Vec<(&String, Counts)> =
            outlets.iter().map(|o| (*o, cells.get(&(*e, *o)).copied().unwrap_or_default())).collect();
        let mut pooled = Counts::default();
        for (_, c) in per_outlet.iter().filter(|(_, c)| c.phi() >= min_support) {
            pooled += *c;
        }
        let reference = pooled.score();
        for (o, c) in per_outlet {
            let bias = if c.phi() >= min_support { c.score() - reference } else { 0.0 };
            out.push(OutletBias { outlet_id: o.clone(), entity_id: (*e).clone(), bias, support: c.phi() });
        }
    }
    BiasTable::from_entries(out)
}

/// Removes outlet bias from an aggregate. Each (outlet, entity) cell's score
/// is shifted by its bias and clamped to [-1, 1]; the aggregate score is the
/// support-weighted mean of the cell scores. Counts are left untouched.
pub fn adjust(aggregate: &SentimentAggregate, table: &BiasTable) -> SentimentAggregate {
    let mut out = aggregate.clone();
    out.adjusted = true;
    let phi = aggregate.phi();
    let mut any_bias = false;
    let mut weighted = 0.0;
    for ((outlet, entity), counts) in &aggregate.breakdown {
        let bias = match table.get(outlet, entity) {
            Some(b) => b.bias,
            None => {
                warn!("no bias entry for outlet `{outlet}`, entity `{entity}`; using 0");
                0.0
            }
        };
        any_bias |= bias != 0.0;
        let cell = (counts.score() - bias).clamp(-1.0, 1.0);
        weighted += counts.phi() as f64 * cell;
    }
    if any_bias && phi > 0 {
        out.score = (weighted / phi as f64).clamp(-1.0, 1.0);
        out.sis = sis_from_score(out.score, phi);
    }
    out
}

/// CSV `outlet_id,entity_id,bias,support`.
pub fn write_bias(out: impl Write, table: &BiasTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Data(format!("writing bias table: {e}"));
    w.write_record(["outlet_id", "entity_id", "bias", "support"]).map_err(err)?;
    for b in table.entries() {
        w.write_record([b.outlet_id.clone(), b.entity_id.clone(), b.bias.to_string(), b.support.to_string()])
            .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Data(format!("writing bias table: {e}")))?;
    Ok(())
}

pub fn read_bias(reader: impl Read) -> Result<BiasTable> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Data(format!("bias table: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["outlet_id", "entity_id", "bias", "support"] {
        return Err(Error::Data(format!("bias table: unexpected header `{}`", header.join(","))));
    }
    let mut entries = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let bad = |m: String| Error::Data(format!("bias table line {}: {m}", i + 2));
        let r = rec.map_err(|e| bad(e.to_string()))?;
        let bias: f64 = r[2].parse().map_err(|_| bad(format!("bad bias `{}`", &r[2])))?;
        if !bias.is_finite() {
            return Err(bad(format!("bias `{}` is not finite", &r[2])));
        }
        entries.push(OutletBias {
            outlet_id: r[0].to_string(),
            entity_id: r[1].to_string(),
            bias,
            support: r[3].parse().map_err(|_| bad(format!("bad support `{}`", &r[3])))?,
        });
    }
    Ok(BiasTable::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{Scope, Subject};
    use crate::sentiment::{EntityLabel, LabelSource, Sentiment};
    use chrono::{TimeZone, Utc};

    fn labels(outlet: &str, entity: &str, pos: usize, neg: usize, neu: usize) -> Vec<DatedLabel> {
        let kinds = std::iter::repeat_n(Sentiment::Pos, pos)
            .chain(std::iter::repeat_n(Sentiment::Neg, neg))
            .chain(std::iter::repeat_n(Sentiment::Neu, neu));
        kinds
            .enumerate()
            .map(|(i, sentiment)| DatedLabel {
                label: EntityLabel {
                    article_id: format!("{outlet}-{i}"),
                    entity_id: entity.into(),
                    sentiment,
                    confidence: 1.0,
                    source: LabelSource::External,
                },
                outlet: outlet.into(),
                published_at: Utc.timestamp_opt(i as i64, 0).unwrap(),
            })
            .collect()
    }

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn agg(ls: &[DatedLabel]) -> SentimentAggregate {
        let mut breakdown: BTreeMap<(String, String), Counts> = BTreeMap::new();
        for l in ls {
            breakdown
                .entry((l.outlet.clone(), l.label.entity_id.clone()))
                .or_default()
                .record(l.label.sentiment);
        }
        SentimentAggregate::from_breakdown(
            Subject::Entity("e".into()),
            Scope::National,
            TimeWindow::unbounded(),
            breakdown,
        )
    }

    #[test]
    fn single_outlet_has_no_bias() {
        let ls = labels("x", "e", 9, 3, 2);
        let t = identify_bias(&ls, &strings(&["x"]), &strings(&["e"]), TimeWindow::unbounded(), 10);
        assert_eq!(t.get("x", "e").unwrap().bias, 0.0);
        assert_eq!(t.get("x", "e").unwrap().support, 14);
    }

    #[test]
    fn two_outlets_centre_on_pooled_score() {
        // X: +0.4 over 10, Y: +0.2 over 10 → pooled +0.3.
        let mut ls = labels("x", "e", 6, 2, 2);
        ls.extend(labels("y", "e", 4, 2, 4));
        let t = identify_bias(&ls, &strings(&["x", "y"]), &strings(&["e"]), TimeWindow::unbounded(), 10);
        assert!((t.get("x", "e").unwrap().bias - 0.1).abs() < 1e-12);
        assert!((t.get("y", "e").unwrap().bias + 0.1).abs() < 1e-12);

        let x = adjust(&agg(&ls[..10]), &t);
        let y = adjust(&agg(&ls[10..]), &t);
        assert!((x.score - 0.3).abs() < 1e-12 && (y.score - 0.3).abs() < 1e-12);
        let both = adjust(&agg(&ls), &t);
        assert!((both.score - 0.3).abs() < 1e-12);
        assert!(both.adjusted);
        assert_eq!(both.counts, agg(&ls).counts);
    }

    #[test]
    fn thin_support_gets_zero_bias() {
        let mut ls = labels("x", "e", 3, 0, 0);
        ls.extend(labels("y", "e", 0, 10, 0));
        let t = identify_bias(&ls, &strings(&["x", "y"]), &strings(&["e"]), TimeWindow::unbounded(), 10);
        assert_eq!(t.get("x", "e").unwrap().bias, 0.0);
        assert_eq!(t.get("y", "e").unwrap().bias, 0.0);
    }

    #[test]
    fn zero_biases_are_identity() {
        let ls = labels("x", "e", 5, 3, 1);
        let t = BiasTable::from_entries([OutletBias {
            outlet_id: "x".into(),
            entity_id: "e".into(),
            bias: 0.0,
            support: 9,
        }]);
        let raw = agg(&ls);
        let adj = adjust(&raw, &t);
        assert_eq!((adj.score, adj.sis), (raw.score, raw.sis));
        // Missing entries count as zero.
        let adj = adjust(&raw, &BiasTable::default());
        assert_eq!((adj.score, adj.sis), (raw.score, raw.sis));
    }

    #[test]
    fn clamps_to_unit_interval() {
        let entry = |bias| {
            BiasTable::from_entries([OutletBias {
                outlet_id: "x".into(),
                entity_id: "e".into(),
                bias,
                support: 20,
            }])
        };
        // 39 POS, 1 NEG → +0.95.
        let up = adjust(&agg(&labels("x", "e", 39, 1, 0)), &entry(-0.2));
        assert_eq!(up.score, 1.0);
        let down = adjust(&agg(&labels("x", "e", 1, 39, 0)), &entry(-0.2));
        assert!((down.score + 0.75).abs() < 1e-12);
        assert!((down.sis - down.score * 40f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let mut ls = labels("x", "e", 6, 2, 2);
        ls.extend(labels("y", "e", 4, 2, 4));
        let t = identify_bias(&ls, &strings(&["x", "y"]), &strings(&["e", "f"]), TimeWindow::unbounded(), 10);
        let mut buf = Vec::new();
        write_bias(&mut buf, &t).unwrap();
        assert_eq!(read_bias(buf.as_slice()).unwrap(), t);
        assert_eq!(t.len(), 4);
    }
}
