//! Rule-based stemming for English and French.
//!
//! The per-language algorithms are single-pass. [`Stemmer::stem`] iterates the
//! pass to a fixed point so that `stem(stem(t)) == stem(t)` holds for every
//! token, which is the property downstream lexicon lookups rely on.

pub mod french;
pub mod porter;

use std::collections::{BTreeMap, BTreeSet};

use crate::text::Language;

const MAX_PASSES: usize = 32;

#[derive(Debug, Clone, Default)]
pub struct Stemmer {
    /// Word → replacement. A word mapped to itself is protected from stemming.
    exceptions: BTreeMap<String, String>,
}

impl Stemmer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses an exception list: one entry per line, `word` to protect the
    /// word from stemming or `word=stem` to force a stem. `#` starts a comment.
    pub fn with_exceptions(text: &str) -> Self {
        let exceptions = crate::text::data_lines(text)
            .map(|line| match line.split_once('=') {
                Some((w, s)) => (w.trim().to_lowercase(), s.trim().to_lowercase()),
                None => (line.to_lowercase(), line.to_lowercase()),
            })
            .collect();
        Self { exceptions }
    }

    fn pass(&self, token: &str, language: Language) -> String {
        if let Some(s) = self.exceptions.get(token) {
            return s.clone();
        }
        match language {
            Language::En => porter::stem_once(token),
            // Unknown-language tokens are stemmed with the French rules, the
            // majority language of the outlets this targets.
            Language::Fr | Language::Unknown => french::stem_once(token),
        }
    }

    pub fn stem(&self, token: &str, language: Language) -> String {
        let mut seen = BTreeSet::new();
        let mut current = token.to_string();
        for _ in 0..MAX_PASSES {
            let next = self.pass(&current, language);
            if next == current {
                return current;
            }
            if !seen.insert(current.clone()) {
                // a cycle through the exception table; settle on its least member
                return cycle_min(self, &current, language);
            }
            current = next;
        }
        current
    }
}

fn cycle_min(stemmer: &Stemmer, start: &str, language: Language) -> String {
    let mut min = start.to_string();
    let mut cur = stemmer.pass(start, language);
    while cur != start {
        if cur < min {
            min = cur.clone();
        }
        cur = stemmer.pass(&cur, language);
    }
    min
}
