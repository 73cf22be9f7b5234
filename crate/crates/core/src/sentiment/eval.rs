use std::collections::BTreeMap;

use super::{EntityLabel, Sentiment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub per_class: BTreeMap<Sentiment, ClassMetrics>,
    pub macro_f1: f64,
    /// `confusion[gold][predicted]`, indexed in POS, NEG, NEU order.
    pub confusion: [[u64; 3]; 3],
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Standard multiclass metrics; any 0/0 precision, recall or F1 is 0.
pub fn evaluate(predicted: &[EntityLabel], gold: &[EntityLabel]) -> Result<EvalReport> {
    let pred: BTreeMap<_, _> = predicted.iter().map(|l| (l.key(), l.sentiment)).collect();
    let gold: BTreeMap<_, _> = gold.iter().map(|l| (l.key(), l.sentiment)).collect();
    let missing_in_predicted: Vec<_> = gold.keys().filter(|k| !pred.contains_key(*k)).cloned().collect();
    let missing_in_gold: Vec<_> = pred.keys().filter(|k| !gold.contains_key(*k)).cloned().collect();
    if !missing_in_predicted.is_empty() || !missing_in_gold.is_empty() {
        return Err(Error::KeyMismatch { missing_in_predicted, missing_in_gold });
    }

    let mut confusion = [[0u64; 3]; 3];
    for (key, g) in &gold {
        confusion[g.index()][pred[key].index()] += 1;
    }
    let total: u64 = confusion.iter().flatten().sum();
    let trace: u64 = (0..3).map(|i| confusion[i][i]).sum();

    let mut per_class = BTreeMap::new();
    for class in Sentiment::ALL {
        let k = class.index();
        let tp = confusion[k][k];
        let predicted_k: u64 = (0..3).map(|g| confusion[g][k]).sum();
        let gold_k: u64 = confusion[k].iter().sum();
        let precision = ratio(tp, predicted_k);
        let recall = ratio(tp, gold_k);
        let f1 =
            if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        per_class.insert(class, ClassMetrics { precision, recall, f1 });
    }
    let macro_f1 = per_class.values().map(|m| m.f1).sum::<f64>() / 3.0;
    Ok(EvalReport { accuracy: ratio(trace, total), per_class, macro_f1, confusion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentiment::LabelSource;
    use Sentiment::*;

    fn labels(s: &[Sentiment]) -> Vec<EntityLabel> {
        s.iter()
            .enumerate()
            .map(|(i, &sentiment)| EntityLabel {
                article_id: format!("a{i}"),
                entity_id: "e".into(),
                sentiment,
                confidence: 1.0,
                source: LabelSource::External,
            })
            .collect()
    }

    #[test]
    fn perfect_agreement() {
        let g = labels(&[Pos, Neg, Neu, Pos]);
        let r = evaluate(&g, &g).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.macro_f1, 1.0);
    }

    #[test]
    fn one_error_in_four() {
        let r = evaluate(&labels(&[Pos, Neg, Neg, Neu]), &labels(&[Pos, Pos, Neg, Neu])).unwrap();
        assert_eq!(r.accuracy, 0.75);
        assert_eq!(r.confusion, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(r.per_class[&Pos].precision, 1.0);
        assert_eq!(r.per_class[&Pos].recall, 0.5);
        assert_eq!(r.per_class[&Neg].precision, 0.5);
    }

    #[test]
    fn zero_denominators_are_zero() {
        let r = evaluate(&labels(&[Neu, Neu]), &labels(&[Pos, Pos])).unwrap();
        assert_eq!(r.per_class[&Pos].recall, 0.0);
        assert_eq!(r.per_class[&Pos].precision, 0.0);
        assert_eq!(r.per_class[&Neu].precision, 0.0);
        assert_eq!(r.accuracy, 0.0);
    }

    #[test]
    fn key_mismatch_lists_keys() {
        let mut p = labels(&[Pos, Pos]);
        p[1].article_id = "zz".into();
        match evaluate(&p, &labels(&[Pos, Pos])) {
            Err(Error::KeyMismatch { missing_in_predicted, missing_in_gold }) => {
                assert_eq!(missing_in_predicted, [("a1".to_string(), "e".to_string())]);
                assert_eq!(missing_in_gold, [("zz".to_string(), "e".to_string())]);
            }
            other => panic!("{other:?}"),
        }
    }
}
