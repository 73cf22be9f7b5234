//! Net sentiment score, sentiment impact score (SIS) and their aggregation
//! over entities, scopes and time.
//!
//! For ω positive, ψ negative and ν neutral labels with Φ = ω + ψ + ν:
//! score = (ω − ψ)/Φ and SIS = score · ln Φ. Both are 0 when Φ = 0, and
//! SIS is also 0 when Φ = 1.

mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::roster::Roster;
use crate::sentiment::{DatedLabel, Sentiment};
use crate::window::TimeWindow;

pub use series::{
    cumulative_sis, cumulative_sis_change, percent_change, sis_change, weekly_series, write_series,
    SentimentSeries,
};

fn check_counts(omega: u64, psi: u64, phi: u64) -> Result<()> {
    if omega.checked_add(psi).is_none_or(|s| s > phi) {
        return Err(Error::CountInconsistent { omega, psi, phi });
    }
    Ok(())
}

pub fn sentiment_score(omega: u64, psi: u64, phi: u64) -> Result<f64> {
    check_counts(omega, psi, phi)?;
    if phi == 0 {
        return Ok(0.0);
    }
    Ok((omega as f64 - psi as f64) / phi as f64)
}

pub fn sis(omega: u64, psi: u64, phi: u64) -> Result<f64> {
    Ok(sis_from_score(sentiment_score(omega, psi, phi)?, phi))
}

/// `score · ln Φ`, with 0 for Φ ≤ 1.
pub fn sis_from_score(score: f64, phi: u64) -> f64 {
    if phi <= 1 {
        0.0
    } else {
        score * (phi as f64).ln()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Counts {
    pub omega: u64,
    pub psi: u64,
    pub nu: u64,
}

impl Counts {
    pub fn new(omega: u64, psi: u64, nu: u64) -> Self {
        Self { omega, psi, nu }
    }

    pub fn phi(&self) -> u64 {
        self.omega + self.psi + self.nu
    }

    pub fn record(&mut self, s: Sentiment) {
        match s {
            Sentiment::Pos => self.omega += 1,
            Sentiment::Neg => self.psi += 1,
            Sentiment::Neu => self.nu += 1,
        }
    }

    pub fn score(&self) -> f64 {
        sentiment_score(self.omega, self.psi, self.phi()).expect("phi covers omega + psi")
    }

    pub fn sis(&self) -> f64 {
        sis_from_score(self.score(), self.phi())
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, rhs: Self) {
        self.omega += rhs.omega;
        self.psi += rhs.psi;
        self.nu += rhs.nu;
    }
}

/// What is being scored: one entity, or every entity of a party pooled.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subject {
    Entity(String),
    Party(String),
}

impl Subject {
    fn matches(&self, entity_id: &str, roster: &Roster) -> bool {
        match self {
            Subject::Entity(id) => id == entity_id,
            Subject::Party(p) => roster.entity(entity_id).is_some_and(|e| &e.party_id == p),
        }
    }
}

/// Entities print as their id, parties as `party:<id>`.
impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Entity(id) => f.write_str(id),
            Subject::Party(id) => write!(f, "party:{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    National,
    Constituency(String),
    Outlet(String),
}

impl Scope {
    fn matches(&self, label: &DatedLabel, roster: &Roster) -> bool {
        match self {
            Scope::National => true,
            Scope::Outlet(o) => &label.outlet == o,
            Scope::Constituency(c) => roster
                .entity(&label.label.entity_id)
                .is_some_and(|e| e.constituency_id.as_deref() == Some(c.as_str())),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::National => f.write_str("NATIONAL"),
            Scope::Constituency(c) => write!(f, "CONSTITUENCY:{c}"),
            Scope::Outlet(o) => write!(f, "OUTLET:{o}"),
        }
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "NATIONAL" => Ok(Scope::National),
            Some(("CONSTITUENCY", c)) if !c.is_empty() => Ok(Scope::Constituency(c.into())),
            Some(("OUTLET", o)) if !o.is_empty() => Ok(Scope::Outlet(o.into())),
            _ => Err(format!("unknown scope `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentAggregate {
    pub subject: Subject,
    pub scope: Scope,
    pub window: TimeWindow,
    pub counts: Counts,
    pub score: f64,
    pub sis: f64,
    /// Counts per (outlet, entity) cell, so the aggregate can be bias-adjusted.
    pub breakdown: BTreeMap<(String, String), Counts>,
    pub adjusted: bool,
}

impl SentimentAggregate {
    pub fn from_breakdown(
        subject: Subject,
        scope: Scope,
        window: TimeWindow,
        breakdown: BTreeMap<(String, String), Counts>,
    ) -> Self {
        let mut counts = Counts::default();
        for c in breakdown.values() {
            counts += *c;
        }
        Self {
            subject,
            scope,
            window,
            counts,
            score: counts.score(),
            sis: counts.sis(),
            breakdown,
            adjusted: false,
        }
    }

    pub fn phi(&self) -> u64 {
        self.counts.phi()
    }
}

/// Counts the labels of `subject` published inside `window` and within `scope`.
pub fn aggregate(
    labels: &[DatedLabel],
    subject: &Subject,
    scope: &Scope,
    window: TimeWindow,
    roster: &Roster,
) -> SentimentAggregate {
    let mut breakdown: BTreeMap<(String, String), Counts> = BTreeMap::new();
    for l in labels {
        if window.contains(l.published_at)
            && subject.matches(&l.label.entity_id, roster)
            && scope.matches(l, roster)
        {
            breakdown
                .entry((l.outlet.clone(), l.label.entity_id.clone()))
                .or_default()
                .record(l.label.sentiment);
        }
    }
    SentimentAggregate::from_breakdown(subject.clone(), scope.clone(), window, breakdown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_examples() {
        assert_eq!(sentiment_score(5, 5, 12).unwrap(), 0.0);
        assert_eq!(sentiment_score(7, 0, 7).unwrap(), 1.0);
        assert_eq!(sentiment_score(43, 27, 100).unwrap(), 0.16);
        assert_eq!(sentiment_score(0, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn sis_examples() {
        assert_eq!(sis(1, 0, 1).unwrap(), 0.0);
        assert_eq!(sis(0, 0, 0).unwrap(), 0.0);
        assert!((sis(43, 27, 100).unwrap() - 0.736_827_229_758_094_7).abs() < 1e-12);
        assert!((sis(0, 10, 10).unwrap() + 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_counts() {
        assert!(matches!(sentiment_score(3, 3, 5), Err(Error::CountInconsistent { .. })));
        assert!(sis(u64::MAX, 1, u64::MAX).is_err());
    }

    #[test]
    fn scope_round_trips_through_text() {
        for s in [Scope::National, Scope::Constituency("c01".into()), Scope::Outlet("lexpress".into())] {
            assert_eq!(s.to_string().parse::<Scope>().unwrap(), s);
        }
        assert!("OUTLET:".parse::<Scope>().is_err());
    }
}
