use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;
use unicode_segmentation::UnicodeSegmentation;

use super::{clean_text, Language, Stemmer, StopWords};
use crate::ingest::Article;

const CLITICS: &[&str] =
    &["l", "d", "j", "m", "n", "s", "t", "c", "qu", "jusqu", "lorsqu", "puisqu", "quoiqu"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub stem: String,
    /// Char index into the cleaned text.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedArticle {
    pub article_id: String,
    pub language: Language,
    pub tokens: Vec<Token>,
}

/// Lowercases and strips diacritics, for accent-insensitive comparison.
pub fn fold(s: &str) -> String {
    s.nfd().filter(|c| !is_combining_mark(*c)).flat_map(char::to_lowercase).collect()
}

/// Splits a French elided clitic off the front of a lowercase word:
/// `l'élection` becomes `l'` and `élection`.
pub(crate) fn split_clitic(word: &str) -> Vec<String> {
    if let Some((head, rest)) = word.split_once('\'') {
        if !rest.is_empty() && CLITICS.contains(&head) {
            return vec![format!("{head}'"), rest.to_string()];
        }
    }
    vec![word.to_string()]
}

#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    pub stopwords: StopWords,
    pub stemmer: Stemmer,
}

impl Tokenizer {
    pub fn new(stopwords: StopWords, stemmer: Stemmer) -> Self {
        Self { stopwords, stemmer }
    }

    pub fn builtin() -> Self {
        Self::new(StopWords::builtin(), Stemmer::new())
    }

    /// Segments already-cleaned text into lowercase words, splitting French
    /// clitics, without stop-word removal. Returns `(word, char offset)`.
    pub fn words(&self, text: &str, language: Language) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        let mut char_pos = 0usize;
        let mut byte_pos = 0usize;
        for (byte_idx, word) in text.unicode_word_indices() {
            char_pos += text[byte_pos..byte_idx].chars().count();
            byte_pos = byte_idx;
            let lower = word.to_lowercase();
            let parts = if language == Language::En { vec![lower] } else { split_clitic(&lower) };
            let mut offset = char_pos;
            for part in parts {
                let len = part.chars().count();
                out.push((part, offset));
                offset += len;
            }
        }
        out
    }

    /// Tokenizes cleaned text: segmentation, lowercasing, clitic splitting,
    /// stop-word removal and stemming.
    pub fn tokenize(&self, text: &str, language: Language) -> Vec<Token> {
        self.words(text, language)
            .into_iter()
            .filter(|(w, _)| !self.stopwords.contains(w, language))
            .map(|(surface, offset)| Token { stem: self.stemmer.stem(&surface, language), surface, offset })
            .collect()
    }

    /// Cleans and tokenizes an article's title followed by its body.
    pub fn prepare(&self, article: &Article) -> TokenizedArticle {
        let text = clean_text(&format!("{}\n{}", article.title, article.body));
        TokenizedArticle {
            article_id: article.id.clone(),
            language: article.language,
            tokens: self.tokenize(&text, article.language),
        }
    }
}
