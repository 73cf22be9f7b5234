//! Seat allocation from bias-adjusted constituency sentiment.
//!
//! Each party's weight is its adjusted score shifted to [0, 2]. Seats go by
//! largest remainder on the weight shares. With two parties that is the
//! same as rounding party A's quota at half-integers. Each half-integer
//! threshold is tested by cross-multiplication, so the result is exactly
//! monotone in either weight and exactly symmetric under swapping parties.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write;

use crate::bias::{adjust, BiasTable};
use crate::error::{Error, Result};
use crate::roster::{ConstituencyDef, Roster};
use crate::scoring::{aggregate, Scope, SentimentAggregate, Subject};
use crate::sentiment::DatedLabel;
use crate::window::TimeWindow;

/// One side of a two-party contest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contender<'a> {
    pub party_id: &'a str,
    pub score: f64,
    pub sis: f64,
}

/// Seats for `a` and `b` in a constituency of `magnitude` seats.
pub fn allocate_seats(a: &Contender<'_>, b: &Contender<'_>, magnitude: u32) -> Result<(u32, u32)> {
    for c in [a, b] {
        if !(-1.0..=1.0).contains(&c.score) {
            return Err(Error::ScoreOutOfRange(c.score));
        }
    }
    Ok(allocate_by_weights(a, a.score + 1.0, b, b.score + 1.0, magnitude))
}

/// Largest-remainder allocation on arbitrary non-negative weights; only
/// the ratio of the weights matters. Two zero weights split evenly.
pub fn allocate_by_weights(
    a: &Contender<'_>,
    w_a: f64,
    b: &Contender<'_>,
    w_b: f64,
    magnitude: u32,
) -> (u32, u32) {
    let (w_a, w_b) = if w_a == 0.0 && w_b == 0.0 { (1.0, 1.0) } else { (w_a, w_b) };
    let m = f64::from(magnitude);
    // A's quota m·w_a/(w_a+w_b) exceeds k + 1/2 iff (2m−2k−1)·w_a > (2k+1)·w_b.
    let mut seats_a = 0;
    for k in 0..magnitude {
        let lhs = (2.0 * m - 2.0 * f64::from(k) - 1.0) * w_a;
        let rhs = (2.0 * f64::from(k) + 1.0) * w_b;
        let wins = if lhs != rhs {
            lhs > rhs
        } else if a.sis != b.sis {
            a.sis > b.sis
        } else {
            a.party_id <= b.party_id
        };
        seats_a += u32::from(wins);
    }
    (seats_a, magnitude - seats_a)
}

/// The adjusted aggregate behind one party's seats in a constituency.
#[derive(Debug, Clone, PartialEq)]
pub struct PartyBasis {
    pub party_id: String,
    pub aggregate: SentimentAggregate,
    /// The local aggregate was empty and the national one was used instead.
    pub fallback: bool,
    /// The party fields no candidate here.
    pub uncontested: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstituencyForecast {
    pub constituency_id: String,
    pub name: String,
    pub magnitude: u32,
    pub seats: BTreeMap<String, u32>,
    pub basis: [PartyBasis; 2],
    pub fallback_used: bool,
}

/// Adjusted national score of each party, used when local data is missing.
pub fn national_party_scores(
    labels: &[DatedLabel],
    bias: &BiasTable,
    roster: &Roster,
    window: TimeWindow,
) -> BTreeMap<String, SentimentAggregate> {
    roster
        .party_ids()
        .iter()
        .map(|p| {
            let subject = Subject::Party(p.to_string());
            let raw = aggregate(labels, &subject, &Scope::National, window, roster);
            (p.to_string(), adjust(&raw, bias))
        })
        .collect()
}

/// Pools each party's candidates in the constituency and bias-adjusts the
/// result. A party with no local labels falls back to its national score.
pub fn constituency_scores(
    labels: &[DatedLabel],
    bias: &BiasTable,
    constituency: &ConstituencyDef,
    roster: &Roster,
    window: TimeWindow,
    national: &BTreeMap<String, SentimentAggregate>,
) -> [PartyBasis; 2] {
    let scope = Scope::Constituency(constituency.constituency_id.clone());
    roster.party_ids().map(|p| {
        let subject = Subject::Party(p.to_string());
        let local = adjust(&aggregate(labels, &subject, &scope, window, roster), bias);
        let uncontested = constituency.candidates_of(p).is_empty();
        let fallback = local.phi() == 0 && !uncontested;
        let aggregate = match national.get(p) {
            Some(n) if fallback => n.clone(),
            _ => local,
        };
        PartyBasis { party_id: p.to_string(), aggregate, fallback, uncontested }
    })
}

pub fn forecast_constituency(
    labels: &[DatedLabel],
    bias: &BiasTable,
    constituency: &ConstituencyDef,
    roster: &Roster,
    window: TimeWindow,
    national: &BTreeMap<String, SentimentAggregate>,
) -> Result<ConstituencyForecast> {
    let basis = constituency_scores(labels, bias, constituency, roster, window, national);
    fn contender(b: &PartyBasis) -> Contender<'_> {
        Contender { party_id: &b.party_id, score: b.aggregate.score, sis: b.aggregate.sis }
    }
    let m = constituency.magnitude;
    let (sa, sb) = match (basis[0].uncontested, basis[1].uncontested) {
        (false, true) => (m, 0),
        (true, false) => (0, m),
        _ => allocate_seats(&contender(&basis[0]), &contender(&basis[1]), m)?,
    };
    let seats = BTreeMap::from([(basis[0].party_id.clone(), sa), (basis[1].party_id.clone(), sb)]);
    Ok(ConstituencyForecast {
        constituency_id: constituency.constituency_id.clone(),
        name: constituency.name.clone(),
        magnitude: m,
        seats,
        fallback_used: basis.iter().any(|b| b.fallback),
        basis,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NationalForecast {
    pub per_constituency: Vec<ConstituencyForecast>,
    pub totals: BTreeMap<String, u32>,
}

impl NationalForecast {
    pub fn total_seats(&self) -> u32 {
        self.totals.values().sum()
    }
}

/// Sums seats per party, keeping constituencies in input order.
pub fn national_forecast(per_constituency: Vec<ConstituencyForecast>) -> Result<NationalForecast> {
    if per_constituency.is_empty() {
        return Err(Error::Data("national forecast needs at least one constituency".into()));
    }
    let mut seen = BTreeSet::new();
    let mut totals: BTreeMap<String, u32> = BTreeMap::new();
    for c in &per_constituency {
        if !seen.insert(c.constituency_id.as_str()) {
            return Err(Error::DuplicateConstituency(c.constituency_id.clone()));
        }
        for (party, seats) in &c.seats {
            *totals.entry(party.clone()).or_default() += seats;
        }
    }
    Ok(NationalForecast { per_constituency, totals })
}

/// Forecasts every constituency of the roster.
pub fn forecast_all(
    labels: &[DatedLabel],
    bias: &BiasTable,
    roster: &Roster,
    window: TimeWindow,
) -> Result<NationalForecast> {
    let national = national_party_scores(labels, bias, roster, window);
    let per = roster
        .constituencies()
        .iter()
        .map(|c| forecast_constituency(labels, bias, c, roster, window, &national))
        .collect::<Result<Vec<_>>>()?;
    national_forecast(per)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Data(format!("writing forecast: {e}"))
}

/// Table with one row per constituency and a closing `Total Seats` row.
pub fn write_forecast(out: impl Write, forecast: &NationalForecast, party_ids: [&str; 2]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["constituency", &format!("{}_seats", party_ids[0]), &format!("{}_seats", party_ids[1])])
        .map_err(csv_err)?;
    let seats = |m: &BTreeMap<String, u32>, p: &str| m.get(p).copied().unwrap_or(0).to_string();
    for c in &forecast.per_constituency {
        w.write_record([c.name.clone(), seats(&c.seats, party_ids[0]), seats(&c.seats, party_ids[1])])
            .map_err(csv_err)?;
    }
    w.write_record([
        "Total Seats".to_string(),
        seats(&forecast.totals, party_ids[0]),
        seats(&forecast.totals, party_ids[1]),
    ])
    .map_err(csv_err)?;
    w.flush().map_err(|e| Error::Data(format!("writing forecast: {e}")))?;
    Ok(())
}

/// Per-party scores behind each constituency's seats.
pub fn write_forecast_detail(out: impl Write, forecast: &NationalForecast) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "constituency_id",
        "party_id",
        "omega",
        "psi",
        "nu",
        "phi",
        "score",
        "sis",
        "fallback",
        "uncontested",
        "seats",
    ])
    .map_err(csv_err)?;
    for c in &forecast.per_constituency {
        for b in &c.basis {
            let k = b.aggregate.counts;
            w.write_record([
                c.constituency_id.clone(),
                b.party_id.clone(),
                k.omega.to_string(),
                k.psi.to_string(),
                k.nu.to_string(),
                k.phi().to_string(),
                b.aggregate.score.to_string(),
                b.aggregate.sis.to_string(),
                b.fallback.to_string(),
                b.uncontested.to_string(),
                c.seats[&b.party_id].to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::Data(format!("writing forecast: {e}")))?;
    Ok(())
}

const COLOURS: [&str; 2] = ["#1f5fa8", "#d9822b"];

/// Standalone SVG: one horizontal bar split by national seat totals. Every
/// segment carries its party and seat count as `data-*` attributes.
pub fn render_chart(forecast: &NationalForecast, roster: &Roster) -> String {
    let (width, bar_x, bar_w, bar_h) = (640.0, 20.0, 600.0, 48.0);
    let total = f64::from(forecast.total_seats().max(1));
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="150" viewBox="0 0 {width} 150" data-total-seats="{}">"#,
        forecast.total_seats()
    );
    let _ = writeln!(
        svg,
        r#"  <text x="{bar_x}" y="28" font-family="sans-serif" font-size="16">Seat forecast ({} seats)</text>"#,
        forecast.total_seats()
    );
    let mut x = bar_x;
    for (i, party) in roster.parties().iter().enumerate() {
        let seats = forecast.totals.get(&party.id).copied().unwrap_or(0);
        let w = bar_w * f64::from(seats) / total;
        let name = html_escape::encode_double_quoted_attribute(&party.name);
        let _ = writeln!(
            svg,
            r#"  <rect class="segment" x="{x}" y="44" width="{w}" height="{bar_h}" fill="{}" data-party="{}" data-party-name="{name}" data-seats="{seats}"/>"#,
            COLOURS[i % 2],
            party.id
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="13" data-party="{}">{}: {seats}</text>"#,
            bar_x + 320.0 * i as f64,
            44.0 + bar_h + 28.0,
            party.id,
            html_escape::encode_text(&party.name)
        );
        x += w;
    }
    svg.push_str("</svg>\n");
    svg
}
