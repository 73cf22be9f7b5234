use std::collections::BTreeSet;

use chrono::{DateTime, Utc};

use super::DatedLabel;
use crate::error::{Error, Result};
use crate::ingest::Article;

pub const DEFAULT_SPLIT_RATIO: f64 = 0.8;

/// Orders articles by `(published_at, id)` and puts the first `⌈ratio·n⌉`
/// in the training half.
pub fn chronological_split(mut articles: Vec<Article>, ratio: f64) -> Result<(Vec<Article>, Vec<Article>)> {
    let n_train = train_len(articles.len(), ratio)?;
    articles.sort_by(|a, b| (a.published_at, &a.id).cmp(&(b.published_at, &b.id)));
    let test = articles.split_off(n_train);
    Ok((articles, test))
}

fn train_len(n: usize, ratio: f64) -> Result<usize> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    if n == 0 {
        return Err(Error::Data("cannot split an empty corpus".into()));
    }
    // The epsilon keeps 0.28·25 = 7.000000000000001 from rounding up to 8.
    Ok((((ratio * n as f64) - 1e-9).ceil() as usize).min(n))
}

/// The same split applied to the articles referenced by a label set:
/// returns the ids of the training articles.
pub fn train_article_ids(labels: &[DatedLabel], ratio: f64) -> Result<BTreeSet<String>> {
    let articles: BTreeSet<(DateTime<Utc>, &str)> =
        labels.iter().map(|l| (l.published_at, l.label.article_id.as_str())).collect();
    let n_train = train_len(articles.len(), ratio)?;
    Ok(articles.into_iter().take(n_train).map(|(_, id)| id.to_string()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Language;
    use chrono::{TimeZone, Utc};

    fn art(i: i64, body: &str) -> Article {
        Article::new("o", "u", Utc.timestamp_opt(i * 86_400, 0).unwrap(), Language::En, "t", body)
    }

    #[test]
    fn ten_articles_split_eight_two() {
        let arts: Vec<_> = (0..10).rev().map(|i| art(i, &format!("body {i}"))).collect();
        let (train, test) = chronological_split(arts, 0.8).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
        let last_train = train.iter().map(|a| a.published_at).max().unwrap();
        assert!(test.iter().all(|a| a.published_at >= last_train));
    }

    #[test]
    fn single_article_goes_to_train() {
        let (train, test) = chronological_split(vec![art(0, "x")], 0.8).unwrap();
        assert_eq!((train.len(), test.len()), (1, 0));
    }

    #[test]
    fn equal_timestamps_ordered_by_id() {
        let a = art(0, "first");
        let b = art(0, "second");
        let (x, _) = chronological_split(vec![a.clone(), b.clone()], 0.5).unwrap();
        let (y, _) = chronological_split(vec![b, a], 0.5).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 1);
    }

    #[test]
    fn ceiling_is_not_inflated_by_rounding() {
        let arts: Vec<_> = (0..25).map(|i| art(i, &format!("b{i}"))).collect();
        assert_eq!(chronological_split(arts, 0.28).unwrap().0.len(), 7);
        let arts: Vec<_> = (0..3).map(|i| art(i, &format!("b{i}"))).collect();
        assert_eq!(chronological_split(arts, 0.5).unwrap().0.len(), 2);
    }

    #[test]
    fn ratio_must_be_open_interval() {
        for r in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(chronological_split(vec![art(0, "x")], r), Err(Error::InvalidRatio(_))));
        }
    }
}
