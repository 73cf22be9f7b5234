use std::sync::LazyLock;

use regex::Regex;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

static SCRIPT_STYLE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?is)<script\b.*?</script\s*>|<style\b.*?</style\s*>|<!--.*?-->").unwrap());
static TAG: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"<\s*/?\s*([A-Za-z][A-Za-z0-9]*)?[^>]*>").unwrap());

/// Tags that do not break words: removed without leaving a space.
const INLINE_TAGS: &[&str] = &[
    "a", "abbr", "b", "cite", "code", "em", "font", "i", "mark", "q", "s", "small", "span", "strong", "sub",
    "sup", "u",
];

fn normalize_quotes(text: &str) -> String {
    text.nfc().map(|c| if matches!(c, '\u{2019}' | '\u{2018}') { '\'' } else { c }).collect()
}
static URL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\S*(?:https?://|www\.)\S*").unwrap());

/// Strips markup, URLs, control and special characters from raw article text.
///
/// Sentence punctuation (`. ! ? ,`) survives, as do apostrophes and hyphens
/// between two alphanumeric characters. Whitespace is collapsed to single
/// spaces. The function is idempotent.
pub fn clean_text(raw: &str) -> String {
    let text = normalize_quotes(raw);
    let text = SCRIPT_STYLE.replace_all(&text, " ");
    let text = TAG.replace_all(&text, |caps: &regex::Captures<'_>| {
        let inline = caps
            .get(1)
            .is_some_and(|name| INLINE_TAGS.contains(&name.as_str().to_ascii_lowercase().as_str()));
        if inline {
            ""
        } else {
            " "
        }
    });
    let text = normalize_quotes(&html_escape::decode_html_entities(&text));
    let text = URL.replace_all(&text, " ");

    let chars: Vec<char> = text.chars().collect();
    let is_word_char = |c: char| c.is_alphanumeric() || is_combining_mark(c);
    let filtered: String = chars
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if is_word_char(c) || matches!(c, '.' | '!' | '?' | ',') {
                c
            } else if matches!(c, '\'' | '-') {
                let prev = i.checked_sub(1).map(|j| chars[j]);
                let next = chars.get(i + 1).copied();
                if prev.is_some_and(is_word_char) && next.is_some_and(is_word_char) {
                    c
                } else {
                    ' '
                }
            } else {
                ' '
            }
        })
        .collect();

    filtered
        .split_whitespace()
        .filter(|w| {
            let lower = w.to_lowercase();
            !lower.contains("http") && !lower.contains("www.")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::clean_text;

    #[test]
    fn strips_tags_and_urls() {
        assert_eq!(clean_text("<p>Bonjour</p>"), "Bonjour");
        assert_eq!(clean_text("see https://x.mu/a now"), "see now");
        assert_eq!(clean_text(""), "");
    }

    #[test]
    fn keeps_sentence_punctuation_and_inner_apostrophes() {
        assert_eq!(
            clean_text("L'élection -- c'est « demain » !  Vraiment? Oui, peut-être."),
            "L'élection c'est demain ! Vraiment? Oui, peut-être."
        );
        assert_eq!(clean_text("'quoted' - dash"), "quoted dash");
    }

    #[test]
    fn drops_scripts_styles_and_comments() {
        let raw = "<style>p{color:red}</style><script>var x = '<b>';</script>Texte<!-- note -->ici";
        assert_eq!(clean_text(raw), "Texte ici");
    }

    #[test]
    fn removes_control_characters() {
        assert_eq!(clean_text("a\u{0007}b\tc\r\nd"), "a b c d");
    }

    #[test]
    fn golden_mixed_fixture() {
        let raw = include_str!("../../tests/fixtures/clean/mixed.html");
        let want = include_str!("../../tests/fixtures/clean/mixed.golden.txt");
        assert_eq!(clean_text(raw), want.trim_end_matches('\n'));
    }
}
