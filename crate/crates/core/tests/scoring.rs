use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use proptest::prelude::*;
use seatcast_core::roster::Roster;
use seatcast_core::scoring::{
    aggregate, cumulative_sis_change, percent_change, sentiment_score, sis, weekly_series, Scope, Subject,
};
use seatcast_core::sentiment::{DatedLabel, EntityLabel, LabelSource, Sentiment};
use seatcast_core::window::{TimeWindow, Week};
use seatcast_core::Error;

fn roster() -> Roster {
    Roster::parse(
        r#"
        [[party]]
        id = "a"
        name = "A"
        [[party]]
        id = "b"
        name = "B"
        [[constituency]]
        id = "c1"
        name = "One"
        [[entity]]
        id = "e1"
        name = "E One"
        party = "a"
        aliases = ["One"]
        constituency = "c1"
        [[entity]]
        id = "e2"
        name = "E Two"
        party = "b"
        aliases = ["Two"]
        "#,
    )
    .unwrap()
}

fn label(i: usize, entity: &str, outlet: &str, s: Sentiment, at: DateTime<Utc>) -> DatedLabel {
    DatedLabel {
        label: EntityLabel {
            article_id: format!("a{i}"),
            entity_id: entity.into(),
            sentiment: s,
            confidence: 0.5,
            source: LabelSource::Lexicon,
        },
        outlet: outlet.into(),
        published_at: at,
    }
}

fn day(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn e1() -> Subject {
    Subject::Entity("e1".into())
}

#[test]
fn hand_counted_aggregate_is_order_independent() {
    let t = Utc.with_ymd_and_hms(2024, 3, 1, 12, 0, 0).unwrap();
    let mut ls: Vec<_> = [Sentiment::Pos, Sentiment::Neg, Sentiment::Pos, Sentiment::Neu]
        .into_iter()
        .enumerate()
        .map(|(i, s)| label(i, "e1", "x", s, t))
        .collect();
    let r = roster();
    let a = aggregate(&ls, &e1(), &Scope::National, TimeWindow::unbounded(), &r);
    assert_eq!((a.counts.omega, a.counts.psi, a.counts.nu, a.phi()), (2, 1, 1, 4));
    assert_eq!(a.score, 0.25);
    ls.reverse();
    assert_eq!(aggregate(&ls, &e1(), &Scope::National, TimeWindow::unbounded(), &r), a);

    let none = aggregate(&[], &e1(), &Scope::National, TimeWindow::unbounded(), &r);
    assert_eq!((none.phi(), none.score, none.sis), (0, 0.0, 0.0));
}

#[test]
fn scopes_filter_labels() {
    let t = Utc.with_ymd_and_hms(2024, 3, 1, 0, 0, 0).unwrap();
    let ls = vec![
        label(0, "e1", "x", Sentiment::Pos, t),
        label(1, "e1", "y", Sentiment::Neg, t),
        label(2, "e2", "x", Sentiment::Pos, t),
    ];
    let r = roster();
    let w = TimeWindow::unbounded();
    let a = Subject::Party("a".into());
    assert_eq!(aggregate(&ls, &a, &Scope::Outlet("x".into()), w, &r).phi(), 1);
    assert_eq!(aggregate(&ls, &a, &Scope::Constituency("c1".into()), w, &r).phi(), 2);
    let b = Subject::Party("b".into());
    assert_eq!(aggregate(&ls, &b, &Scope::Constituency("c1".into()), w, &r).phi(), 0);
}

#[test]
fn iso_weeks_are_dense_and_half_open() {
    let r = roster();
    let ls = vec![
        label(0, "e1", "x", Sentiment::Pos, Utc.with_ymd_and_hms(2024, 1, 2, 9, 0, 0).unwrap()),
        label(1, "e1", "x", Sentiment::Neg, Utc.with_ymd_and_hms(2024, 1, 10, 9, 0, 0).unwrap()),
        // Monday 2024-01-15 00:00 belongs to W03, not W02.
        label(2, "e1", "x", Sentiment::Neu, Utc.with_ymd_and_hms(2024, 1, 15, 0, 0, 0).unwrap()),
    ];
    let range = TimeWindow::from_dates(day(2024, 1, 1), day(2024, 1, 28));
    let s = weekly_series(&ls, &e1(), &Scope::National, range, &r).unwrap();
    let weeks: Vec<String> = s.buckets.iter().map(|(w, _)| w.to_string()).collect();
    assert_eq!(weeks, ["2024-W01", "2024-W02", "2024-W03", "2024-W04"]);
    let phis: Vec<u64> = s.buckets.iter().map(|(_, a)| a.phi()).collect();
    assert_eq!(phis, [1, 1, 1, 0]);
    assert_eq!(s.buckets[2].1.counts.nu, 1);

    let empty = weekly_series(&[], &e1(), &Scope::National, range, &r).unwrap();
    assert_eq!(empty.buckets.len(), 4);
    assert!(empty.buckets.iter().all(|(_, a)| a.phi() == 0));
    for pair in empty.buckets.windows(2) {
        assert_eq!(pair[0].1.window.end, pair[1].1.window.start);
    }
}

#[test]
fn cumulative_change() {
    let r = roster();
    let t = |d| Utc.with_ymd_and_hms(2024, 1, d, 9, 0, 0).unwrap();
    let mut ls: Vec<_> = (0..6).map(|i| label(i, "e1", "x", Sentiment::Pos, t(2))).collect();
    ls.push(label(6, "e1", "x", Sentiment::Neg, t(2)));
    let range = TimeWindow::from_dates(day(2024, 1, 1), day(2024, 1, 28));
    let s = weekly_series(&ls, &e1(), &Scope::National, range, &r).unwrap();
    let w = |n: u32| Week::containing(day(2024, 1, 1 + 7 * (n - 1)));
    // Nothing new after week 1.
    assert_eq!(cumulative_sis_change(&s, w(1), w(3)).unwrap(), 0.0);
    assert!(matches!(cumulative_sis_change(&s, w(3), w(1)), Err(Error::Data(_))));
    let later = Week::containing(day(2024, 6, 3));
    assert!(matches!(cumulative_sis_change(&s, w(1), later), Err(Error::WeekNotInSeries(_))));

    // A single label in week one gives S = 0 there.
    let one = vec![label(0, "e1", "x", Sentiment::Pos, t(2)), label(1, "e1", "x", Sentiment::Pos, t(9))];
    let s = weekly_series(&one, &e1(), &Scope::National, range, &r).unwrap();
    assert!(matches!(cumulative_sis_change(&s, w(1), w(2)), Err(Error::UndefinedBaseline)));
    assert!(cumulative_sis_change(&s, w(2), w(3)).is_ok());
}

#[test]
fn percent_change_examples() {
    assert!((percent_change(0.50, 0.56).unwrap() - 12.0).abs() < 1e-9);
    assert!((percent_change(1.00, 0.91).unwrap() + 9.0).abs() < 1e-9);
    assert!((percent_change(-0.5, -0.25).unwrap() - 50.0).abs() < 1e-12);
    assert!(matches!(percent_change(0.0, 1.0), Err(Error::UndefinedBaseline)));
}

#[test]
fn scaling_counts_changes_sis_by_log_ratio() {
    let (o, p, n) = (30u64, 20u64, 50u64);
    let k = 10u64;
    let base = sis(o, p, o + p + n).unwrap();
    let scaled = sis(k * o, k * p, k * (o + p + n)).unwrap();
    assert_eq!(sentiment_score(o, p, 100).unwrap(), sentiment_score(k * o, k * p, 1000).unwrap());
    let factor = (1000f64).ln() / (100f64).ln();
    assert!((scaled - base * factor).abs() < 1e-9);
}

fn arb_labels() -> impl Strategy<Value = Vec<DatedLabel>> {
    proptest::collection::vec(
        (
            0usize..3,
            prop_oneof![Just("e1"), Just("e2")],
            prop_oneof![Just("x"), Just("y")],
            0i64..(120 * 86_400),
        ),
        0..120,
    )
    .prop_map(|v| {
        let start = Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap().timestamp();
        v.into_iter()
            .enumerate()
            .map(|(i, (s, e, o, secs))| {
                label(i, e, o, Sentiment::ALL[s], Utc.timestamp_opt(start + secs, 0).unwrap())
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn sis_sign_follows_score(omega in 0u64..500, psi in 0u64..500, nu in 0u64..500) {
        let phi = omega + psi + nu;
        prop_assume!(phi >= 2);
        let score = sentiment_score(omega, psi, phi).unwrap();
        let s = sis(omega, psi, phi).unwrap();
        prop_assert_eq!(s.partial_cmp(&0.0), score.partial_cmp(&0.0));
        prop_assert!((-1.0..=1.0).contains(&score));
    }

    #[test]
    fn sis_grows_with_volume_at_fixed_positive_score(
        omega in 1u64..200, psi in 0u64..200, nu in 0u64..200, k in 2u64..20,
    ) {
        prop_assume!(omega > psi);
        let phi = omega + psi + nu;
        let small = sis(omega, psi, phi).unwrap();
        let big = sis(k * omega, k * psi, k * phi).unwrap();
        prop_assert!(big > small);
    }

    #[test]
    fn weekly_buckets_partition_the_range(
        labels in arb_labels(),
        from_day in 0u64..40,
        len_days in 1u64..90,
        entity in prop_oneof![Just("e1"), Just("e2")],
    ) {
        let r = roster();
        let from = day(2024, 1, 1) + chrono::Days::new(from_day);
        let range = TimeWindow::from_dates(from, from + chrono::Days::new(len_days - 1));
        let subject = Subject::Entity(entity.into());
        for scope in [Scope::National, Scope::Outlet("x".into())] {
            let series = weekly_series(&labels, &subject, &scope, range, &r).unwrap();
            let whole = aggregate(&labels, &subject, &scope, range, &r);
            let mut sum = seatcast_core::scoring::Counts::default();
            for (_, b) in &series.buckets {
                sum += b.counts;
            }
            prop_assert_eq!(sum, whole.counts);
            prop_assert_eq!(series.buckets.first().unwrap().1.window.start, range.start);
            prop_assert_eq!(series.buckets.last().unwrap().1.window.end, range.end);
        }
    }
}
