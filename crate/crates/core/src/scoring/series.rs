use std::collections::BTreeMap;
use std::io::Write;

use super::{Counts, Scope, SentimentAggregate, Subject};
use crate::error::{Error, Result};
use crate::roster::Roster;
use crate::sentiment::DatedLabel;
use crate::window::{TimeWindow, Week};

/// Dense weekly buckets for one subject and scope.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentSeries {
    pub subject: Subject,
    pub scope: Scope,
    pub buckets: Vec<(Week, SentimentAggregate)>,
}

/// One bucket per ISO week overlapping `range`, empty weeks included. Each
/// bucket counts labels inside both its week and `range`, so the buckets
/// partition the range.
pub fn weekly_series(
    labels: &[DatedLabel],
    subject: &Subject,
    scope: &Scope,
    range: TimeWindow,
    roster: &Roster,
) -> Result<SentimentSeries> {
    if range.is_empty() {
        return Err(Error::Data("weekly series needs a non-empty date range".into()));
    }
    let mut cells: BTreeMap<Week, BTreeMap<(String, String), Counts>> = BTreeMap::new();
    for l in labels {
        if range.contains(l.published_at)
            && subject.matches(&l.label.entity_id, roster)
            && scope.matches(l, roster)
        {
            cells
                .entry(Week::of(l.published_at))
                .or_default()
                .entry((l.outlet.clone(), l.label.entity_id.clone()))
                .or_default()
                .record(l.label.sentiment);
        }
    }
    let last = Week::of(range.end - chrono::Duration::seconds(1));
    let mut week = Week::of(range.start);
    let mut buckets = Vec::new();
    while week <= last {
        let breakdown = cells.remove(&week).unwrap_or_default();
        let agg = SentimentAggregate::from_breakdown(
            subject.clone(),
            scope.clone(),
            week.window().intersect(&range),
            breakdown,
        );
        buckets.push((week, agg));
        week = week.next();
    }
    Ok(SentimentSeries { subject: subject.clone(), scope: scope.clone(), buckets })
}

/// SIS of the running counts from the series start through each week.
pub fn cumulative_sis(series: &SentimentSeries) -> Vec<(Week, f64)> {
    let mut running = Counts::default();
    series
        .buckets
        .iter()
        .map(|(w, agg)| {
            running += agg.counts;
            (*w, running.sis())
        })
        .collect()
}

/// `100 · (to − from) / |from|`.
pub fn percent_change(from: f64, to: f64) -> Result<f64> {
    if from == 0.0 {
        return Err(Error::UndefinedBaseline);
    }
    Ok(100.0 * (to - from) / from.abs())
}

/// Percent change of cumulative SIS between two weeks of the series.
pub fn cumulative_sis_change(series: &SentimentSeries, from: Week, to: Week) -> Result<f64> {
    sis_change(&cumulative_sis(series), from, to)
}

/// Percent change between two weeks of an already cumulative SIS sequence.
pub fn sis_change(cumulative: &[(Week, f64)], from: Week, to: Week) -> Result<f64> {
    if from >= to {
        return Err(Error::Data(format!("baseline week {from} must precede {to}")));
    }
    let at = |w: Week| {
        cumulative
            .iter()
            .find(|(x, _)| *x == w)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::WeekNotInSeries(w.to_string()))
    };
    percent_change(at(from)?, at(to)?)
}

/// CSV `entity_id,scope,week_start,omega,psi,nu,phi,score,sis`.
pub fn write_series(out: impl Write, series: &[SentimentSeries]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Data(format!("writing series: {e}"));
    w.write_record(["entity_id", "scope", "week_start", "omega", "psi", "nu", "phi", "score", "sis"])
        .map_err(err)?;
    for s in series {
        for (week, agg) in &s.buckets {
            let c = agg.counts;
            w.write_record([
                s.subject.to_string(),
                s.scope.to_string(),
                week.monday().to_string(),
                c.omega.to_string(),
                c.psi.to_string(),
                c.nu.to_string(),
                c.phi().to_string(),
                agg.score.to_string(),
                agg.sis.to_string(),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::Data(format!("writing series: {e}")))?;
    Ok(())
}
