//! Alias matching and the political-context relevance filter.
//!
//! Both work on a folded word sequence: accents stripped, lowercased,
//! apostrophes treated as separators, then segmented into Unicode words.

use std::collections::BTreeSet;

use unicode_segmentation::UnicodeSegmentation;

use super::Article;
use crate::roster::EntityDef;
use crate::text::fold;

pub const DEFAULT_RELEVANCE_WINDOW: usize = 50;

pub fn folded_words(text: &str) -> Vec<String> {
    let folded = fold(text).replace(['\'', '\u{2019}'], " ");
    folded.unicode_words().map(str::to_string).collect()
}

/// Start indices of every whole-word occurrence of `pattern` in `words`.
pub fn find_sequence(words: &[String], pattern: &[String]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > words.len() {
        return Vec::new();
    }
    words.windows(pattern.len()).enumerate().filter(|(_, w)| *w == pattern).map(|(i, _)| i).collect()
}

/// Spans `[start, end)` of all alias occurrences for one entity.
pub fn mention_spans(words: &[String], entity: &EntityDef) -> Vec<(usize, usize)> {
    let mut spans: Vec<_> = entity
        .aliases
        .iter()
        .flat_map(|alias| {
            let pat = folded_words(alias);
            find_sequence(words, &pat).into_iter().map(move |s| (s, s + pat.len()))
        })
        .collect();
    spans.sort_unstable();
    spans.dedup();
    spans
}

fn article_words(article: &Article) -> Vec<String> {
    folded_words(&format!("{}\n{}", article.title, article.body))
}

/// Ids of every roster entity with an alias occurring in the title or body.
pub fn match_entities(article: &Article, roster: &[EntityDef]) -> BTreeSet<String> {
    let words = article_words(article);
    roster.iter().filter(|e| !mention_spans(&words, e).is_empty()).map(|e| e.entity_id.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    NonPolitical,
}

impl std::fmt::Display for DropReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("NON_POLITICAL")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relevance {
    Keep,
    Drop(DropReason),
}

/// Political-context keywords. A keyword may be a phrase; a word ending in
/// `*` matches any word with that prefix.
#[derive(Debug, Clone, Default)]
pub struct ContextKeywords {
    patterns: Vec<Vec<String>>,
}

impl ContextKeywords {
    pub fn new<S: AsRef<str>>(keywords: &[S]) -> Self {
        let patterns = keywords
            .iter()
            .map(|k| {
                fold(k.as_ref())
                    .replace(['\'', '\u{2019}'], " ")
                    .split_whitespace()
                    .map(str::to_string)
                    .collect::<Vec<_>>()
            })
            .filter(|p| !p.is_empty())
            .collect();
        Self { patterns }
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    fn positions(&self, words: &[String]) -> Vec<usize> {
        let word_matches = |w: &str, p: &str| match p.strip_suffix('*') {
            Some(prefix) => w.starts_with(prefix),
            None => w == p,
        };
        let mut out = Vec::new();
        for pat in &self.patterns {
            if pat.len() > words.len() {
                continue;
            }
            for i in 0..=words.len() - pat.len() {
                if pat.iter().zip(&words[i..]).all(|(p, w)| word_matches(w, p)) {
                    out.push(i);
                }
            }
        }
        out
    }
}

/// Keeps the article when a context keyword starts within `window` words of
/// any mention of one of its matched entities. An empty keyword list keeps
/// everything.
pub fn relevance_filter(
    article: &Article,
    roster: &[EntityDef],
    keywords: &ContextKeywords,
    window: usize,
) -> Relevance {
    if keywords.is_empty() {
        return Relevance::Keep;
    }
    let words = article_words(article);
    let spans: Vec<(usize, usize)> = roster
        .iter()
        .filter(|e| article.matched_entities.contains(&e.entity_id))
        .flat_map(|e| mention_spans(&words, e))
        .collect();
    let hits = keywords.positions(&words);
    let near = |k: usize, (start, end): (usize, usize)| {
        let dist = if k < start {
            start - k
        } else if k >= end {
            k + 1 - end
        } else {
            0
        };
        dist <= window
    };
    if hits.iter().any(|&k| spans.iter().any(|&s| near(k, s))) {
        Relevance::Keep
    } else {
        Relevance::Drop(DropReason::NonPolitical)
    }
}

#[cfg(test)]
mod tests {
    use chrono::TimeZone;

    use super::*;
    use crate::text::Language;

    fn entity(id: &str, aliases: &[&str]) -> EntityDef {
        EntityDef {
            entity_id: id.into(),
            display_name: aliases[0].into(),
            party_id: "p".into(),
            aliases: aliases.iter().map(|s| s.to_string()).collect(),
            constituency_id: None,
        }
    }

    fn article(body: &str) -> Article {
        let t = chrono::Utc.with_ymd_and_hms(2024, 1, 2, 0, 0, 0).unwrap();
        Article::new("o", "u", t, Language::Fr, "Titre", body)
    }

    #[test]
    fn alias_hit_is_whole_word_and_accent_insensitive() {
        let roster = [entity("e1", &["Navin X"]), entity("e2", &["Xavier"]), entity("e3", &["Député Éric"])];
        let a = article("Hier, Navin X a déclaré que le depute eric avait tort.");
        assert_eq!(match_entities(&a, &roster), BTreeSet::from(["e1".to_string(), "e3".to_string()]));
        assert!(match_entities(&article("Le Xavierism est mort."), &roster).is_empty());
        assert!(match_entities(&article("Rien à signaler."), &roster).is_empty());
    }

    #[test]
    fn alias_after_elided_article_matches() {
        let roster = [entity("e1", &["Arvin"])];
        assert_eq!(match_entities(&article("La venue d'Arvin."), &roster).len(), 1);
    }

    #[test]
    fn relevance_window() {
        let roster = [entity("e1", &["Navin X"])];
        let kw = ContextKeywords::new(&["élection", "parti*"]);
        let mut near = article("Navin X parle de l'élection.");
        near.matched_entities = match_entities(&near, &roster);
        assert_eq!(relevance_filter(&near, &roster, &kw, 50), Relevance::Keep);

        // mention at word 1 ("titre" is word 0), keyword 60 filler words later
        let filler = vec!["ballon"; 60].join(" ");
        let mut far = article(&format!("Navin X a marqué un but {filler} élection"));
        far.matched_entities = match_entities(&far, &roster);
        assert_eq!(relevance_filter(&far, &roster, &kw, 50), Relevance::Drop(DropReason::NonPolitical));

        let mut sport = article("Navin X a marqué un but au football.");
        sport.matched_entities = match_entities(&sport, &roster);
        assert_eq!(relevance_filter(&sport, &roster, &kw, 50), Relevance::Drop(DropReason::NonPolitical));
        assert_eq!(relevance_filter(&sport, &roster, &ContextKeywords::default(), 50), Relevance::Keep);
        let mut party = article("Navin X quitte son partisan.");
        party.matched_entities = match_entities(&party, &roster);
        assert_eq!(relevance_filter(&party, &roster, &kw, 50), Relevance::Keep);
    }

    #[test]
    fn window_boundary_is_inclusive() {
        let roster = [entity("e1", &["Navin"])];
        let kw = ContextKeywords::new(&["vote"]);
        // words: titre(0) navin(1) w*k vote(2+k); distance = k + 1
        for (k, want) in [(49, Relevance::Keep), (50, Relevance::Drop(DropReason::NonPolitical))] {
            let filler = vec!["mot"; k].join(" ");
            let mut a = article(&format!("Navin {filler} vote"));
            a.matched_entities = match_entities(&a, &roster);
            assert_eq!(relevance_filter(&a, &roster, &kw, 50), want, "k={k}");
        }
    }
}
