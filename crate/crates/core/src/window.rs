//! Half-open UTC time windows and ISO-8601 week arithmetic.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, Days, IsoWeek, NaiveDate, Utc, Weekday};
use serde::{Deserialize, Serialize};

/// `[start, end)` in UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Self {
        Self { start, end }
    }

    pub fn unbounded() -> Self {
        Self { start: DateTime::<Utc>::MIN_UTC, end: DateTime::<Utc>::MAX_UTC }
    }

    /// Whole days `from..=to`, from midnight of `from` to midnight after `to`.
    pub fn from_dates(from: NaiveDate, to: NaiveDate) -> Self {
        Self { start: midnight(from), end: midnight(to + Days::new(1)) }
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn intersect(&self, other: &TimeWindow) -> TimeWindow {
        TimeWindow { start: self.start.max(other.start), end: self.end.min(other.end) }
    }
}

pub fn midnight(d: NaiveDate) -> DateTime<Utc> {
    d.and_hms_opt(0, 0, 0).expect("valid midnight").and_utc()
}

/// An ISO-8601 week, written `2024-W05`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Week {
    monday: NaiveDate,
}

impl Week {
    pub fn containing(d: NaiveDate) -> Self {
        let back = d.weekday().num_days_from_monday() as u64;
        Self { monday: d - Days::new(back) }
    }

    pub fn of(t: DateTime<Utc>) -> Self {
        Self::containing(t.date_naive())
    }

    pub fn monday(&self) -> NaiveDate {
        self.monday
    }

    pub fn iso(&self) -> IsoWeek {
        self.monday.iso_week()
    }

    pub fn next(&self) -> Self {
        Self { monday: self.monday + Days::new(7) }
    }

    pub fn window(&self) -> TimeWindow {
        TimeWindow::new(midnight(self.monday), midnight(self.monday + Days::new(7)))
    }
}

impl fmt::Display for Week {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let iso = self.iso();
        write!(f, "{:04}-W{:02}", iso.year(), iso.week())
    }
}

impl FromStr for Week {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("`{s}` is not an ISO week like 2024-W05");
        let (year, week) = s.split_once("-W").ok_or_else(bad)?;
        let year: i32 = year.parse().map_err(|_| bad())?;
        let week: u32 = week.parse().map_err(|_| bad())?;
        NaiveDate::from_isoywd_opt(year, week, Weekday::Mon).map(|monday| Week { monday }).ok_or_else(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn iso_week_lookup() {
        // 2024-01-01 is a Monday, so it opens 2024-W01.
        assert_eq!(Week::containing(d(2024, 1, 2)).to_string(), "2024-W01");
        assert_eq!(Week::containing(d(2024, 1, 10)).to_string(), "2024-W02");
        // 2021-01-03 (Sunday) still belongs to 2020-W53.
        assert_eq!(Week::containing(d(2021, 1, 3)).to_string(), "2020-W53");
        assert_eq!("2020-W53".parse::<Week>().unwrap().monday(), d(2020, 12, 28));
        assert!("2021-W53".parse::<Week>().is_err());
    }

    #[test]
    fn half_open_boundaries() {
        let w = Week::containing(d(2024, 1, 3)).window();
        assert!(w.contains(midnight(d(2024, 1, 1))));
        assert!(!w.contains(midnight(d(2024, 1, 8))));
        assert!(Week::containing(d(2024, 1, 8)).window().contains(midnight(d(2024, 1, 8))));
    }
}
