use unicode_segmentation::UnicodeSegmentation;

use super::{Language, StopWords};

const DETECTION_TOKENS: usize = 200;

/// Picks the language whose stop words occur most often among the first 200
/// tokens. Ties, including the all-zero case, yield [`Language::Unknown`].
pub fn detect_language(text: &str, stopwords: &StopWords) -> Language {
    let mut en = 0usize;
    let mut fr = 0usize;
    let words = text
        .unicode_words()
        .flat_map(|w| super::tokenize::split_clitic(&w.to_lowercase()))
        .take(DETECTION_TOKENS);
    for word in words {
        let (is_en, is_fr) = stopwords.hits(&word);
        en += usize::from(is_en);
        fr += usize::from(is_fr);
    }
    match en.cmp(&fr) {
        std::cmp::Ordering::Greater => Language::En,
        std::cmp::Ordering::Less => Language::Fr,
        std::cmp::Ordering::Equal => Language::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_by_stopword_majority() {
        let sw = StopWords::builtin();
        // FR hits: le, et, les, de, la (5); EN hits: none
        assert_eq!(detect_language("le gouvernement et les députés de la république", &sw), Language::Fr);
        // EN hits: the, and, the, of, the (5); FR hits: none
        assert_eq!(detect_language("the government and the people of the country", &sw), Language::En);
        assert_eq!(detect_language("", &sw), Language::Unknown);
        assert_eq!(detect_language("Navin Ramgoolam", &sw), Language::Unknown);
    }
}
