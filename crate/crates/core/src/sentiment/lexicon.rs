use std::collections::{BTreeMap, BTreeSet};

use log::warn;

use super::{DatedLabel, EntityLabel, LabelSource, Sentiment};
use crate::error::{Error, Result};
use crate::ingest::{folded_words, Article};
use crate::roster::{EntityDef, Roster};
use crate::text::{data_lines, fold, Language, Stemmer, TokenizedArticle, Tokenizer};

pub const DEFAULT_LEXICON_EN: &str = include_str!("../../data/lexicon_en.txt");
pub const DEFAULT_LEXICON_FR: &str = include_str!("../../data/lexicon_fr.txt");
pub const DEFAULT_WINDOW: usize = 25;
pub const DEFAULT_TAU: f64 = 0.0;

/// Stem → polarity tables for English and French.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    en: BTreeMap<String, i8>,
    fr: BTreeMap<String, i8>,
}

impl Lexicon {
    /// Parses `entry,polarity` lines. Entries are lowercased and stemmed so
    /// either surface words or stems may be listed.
    pub fn parse(en: &str, fr: &str, stemmer: &Stemmer) -> Result<Self> {
        Ok(Self { en: parse_table(en, Language::En, stemmer)?, fr: parse_table(fr, Language::Fr, stemmer)? })
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON_EN, DEFAULT_LEXICON_FR, &Stemmer::new())
            .expect("bundled lexicons are valid")
    }

    pub fn polarity(&self, stem: &str, language: Language) -> Option<i8> {
        match language {
            Language::En => self.en.get(stem),
            Language::Fr | Language::Unknown => self.fr.get(stem),
        }
        .copied()
    }

    pub fn len(&self) -> (usize, usize) {
        (self.en.len(), self.fr.len())
    }
}

fn parse_table(text: &str, language: Language, stemmer: &Stemmer) -> Result<BTreeMap<String, i8>> {
    let mut table = BTreeMap::new();
    for line in data_lines(text) {
        let bad = || Error::Config(format!("{language} lexicon: malformed entry `{line}`"));
        let (entry, pol) = line.rsplit_once(',').ok_or_else(bad)?;
        let pol: i8 = match pol.trim() {
            "1" | "+1" => 1,
            "-1" => -1,
            _ => return Err(bad()),
        };
        let entry = entry.trim().to_lowercase();
        if entry.is_empty() {
            return Err(bad());
        }
        let stem = stemmer.stem(&entry, language);
        if let Some(prev) = table.insert(stem.clone(), pol) {
            if prev != pol {
                return Err(Error::Config(format!(
                    "{language} lexicon: stem `{stem}` listed with both polarities"
                )));
            }
        }
    }
    Ok(table)
}

/// Scores an entity by summing lexicon polarities in a token window around
/// each of its mentions.
#[derive(Debug, Clone)]
pub struct LexiconClassifier {
    pub lexicon: Lexicon,
    pub tokenizer: Tokenizer,
    pub window: usize,
    pub tau: f64,
}

impl LexiconClassifier {
    pub fn new(lexicon: Lexicon, tokenizer: Tokenizer, window: usize, tau: f64) -> Self {
        Self { lexicon, tokenizer, window, tau }
    }

    pub fn builtin() -> Self {
        Self::new(Lexicon::builtin(), Tokenizer::builtin(), DEFAULT_WINDOW, DEFAULT_TAU)
    }

    /// Token index ranges `[start, end)` of every mention of `entity`.
    pub fn mentions(&self, article: &TokenizedArticle, entity: &EntityDef) -> Vec<(usize, usize)> {
        // Folded pieces of each token, remembering which token they came from.
        let mut pieces = Vec::new();
        let mut owner = Vec::new();
        for (i, tok) in article.tokens.iter().enumerate() {
            for w in folded_words(&tok.surface) {
                pieces.push(w);
                owner.push(i);
            }
        }
        let mut spans = BTreeSet::new();
        for alias in &entity.aliases {
            let pattern: Vec<String> = alias
                .split_whitespace()
                .filter(|w| !self.tokenizer.stopwords.contains(&w.to_lowercase(), article.language))
                .flat_map(|w| folded_words(&fold(w)))
                .collect();
            if pattern.is_empty() || pattern.len() > pieces.len() {
                continue;
            }
            for start in 0..=pieces.len() - pattern.len() {
                if pieces[start..start + pattern.len()] == pattern[..] {
                    spans.insert((owner[start], owner[start + pattern.len() - 1] + 1));
                }
            }
        }
        spans.into_iter().collect()
    }

    /// Sum of polarities of the tokens within the window of any mention,
    /// excluding the mention tokens themselves.
    pub fn window_score(&self, article: &TokenizedArticle, spans: &[(usize, usize)]) -> i64 {
        let n = article.tokens.len();
        let mut inside = vec![false; n];
        let mut mention = vec![false; n];
        for &(start, end) in spans {
            let lo = start.saturating_sub(self.window);
            let hi = (end + self.window).min(n);
            inside[lo..hi].iter_mut().for_each(|x| *x = true);
            mention[start..end].iter_mut().for_each(|x| *x = true);
        }
        article
            .tokens
            .iter()
            .enumerate()
            .filter(|(i, _)| inside[*i] && !mention[*i])
            .filter_map(|(_, tok)| self.token_polarity(&tok.stem, &tok.surface, article.language))
            .map(i64::from)
            .sum()
    }

    fn token_polarity(&self, stem: &str, surface: &str, language: Language) -> Option<i8> {
        match language {
            Language::Unknown => self.lexicon.polarity(stem, Language::Fr).or_else(|| {
                let en = self.tokenizer.stemmer.stem(surface, Language::En);
                self.lexicon.polarity(&en, Language::En)
            }),
            lang => self.lexicon.polarity(stem, lang),
        }
    }

    pub fn classify(&self, article: &TokenizedArticle, entity: &EntityDef) -> Result<EntityLabel> {
        let spans = self.mentions(article, entity);
        if spans.is_empty() {
            return Err(Error::NoMention {
                article: article.article_id.clone(),
                entity: entity.entity_id.clone(),
            });
        }
        let s = self.window_score(article, &spans) as f64;
        let sentiment = if s > self.tau {
            Sentiment::Pos
        } else if s < -self.tau {
            Sentiment::Neg
        } else {
            Sentiment::Neu
        };
        Ok(EntityLabel {
            article_id: article.article_id.clone(),
            entity_id: entity.entity_id.clone(),
            sentiment,
            confidence: s.abs() / (s.abs() + 2.0),
            source: LabelSource::Lexicon,
        })
    }
}

#[derive(Debug, Default)]
pub struct ClassifyReport {
    pub labels: Vec<DatedLabel>,
    /// (article, entity) pairs matched at ingest but not found by the classifier.
    pub missed: Vec<(String, String)>,
}

/// Labels every (article, matched entity) pair of a corpus, in corpus order.
pub fn classify_corpus(
    classifier: &LexiconClassifier,
    articles: &[Article],
    roster: &Roster,
) -> ClassifyReport {
    let mut report = ClassifyReport::default();
    for article in articles {
        let tokens = classifier.tokenizer.prepare(article);
        for entity_id in &article.matched_entities {
            let Some(entity) = roster.entity(entity_id) else {
                warn!("article {}: entity `{entity_id}` not in roster, skipped", article.id);
                continue;
            };
            match classifier.classify(&tokens, entity) {
                Ok(label) => report.labels.push(DatedLabel {
                    label,
                    outlet: article.outlet.clone(),
                    published_at: article.published_at,
                }),
                Err(e) => {
                    warn!("{e}; pair skipped");
                    report.missed.push((article.id.clone(), entity_id.clone()));
                }
            }
        }
    }
    report
}
