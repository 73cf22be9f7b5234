//! Snowball French stemmer.
//!
//! Words are processed as `char` vectors. Vowel-flanked `u`/`i`, vowel-adjacent
//! `y` and `u` after `q` are marked upper case so they count as consonants,
//! then unmarked at the end.

const VOWELS: &str = "aeiouyâàëéêèïîôûù";

fn is_vowel(c: char) -> bool {
    VOWELS.contains(c)
}

struct Word {
    chars: Vec<char>,
    rv: usize,
    r1: usize,
    r2: usize,
}

impl Word {
    fn len(&self) -> usize {
        self.chars.len()
    }

    fn ends_with(&self, suffix: &str) -> bool {
        let s: Vec<char> = suffix.chars().collect();
        self.chars.ends_with(&s)
    }

    /// Start index of `suffix` if the word ends with it.
    fn suffix_start(&self, suffix: &str) -> Option<usize> {
        self.ends_with(suffix).then(|| self.len() - suffix.chars().count())
    }

    /// Longest suffix in `list` that the word ends with, starting at or after `limit`.
    fn longest<'a>(&self, list: &[&'a str], limit: usize) -> Option<(&'a str, usize)> {
        list.iter()
            .filter_map(|s| self.suffix_start(s).map(|start| (*s, start)))
            .filter(|(_, start)| *start >= limit)
            .max_by_key(|(s, _)| s.chars().count())
    }

    fn truncate(&mut self, at: usize) {
        self.chars.truncate(at);
    }

    fn replace_from(&mut self, at: usize, with: &str) {
        self.chars.truncate(at);
        self.chars.extend(with.chars());
    }

    fn char_before(&self, at: usize) -> Option<char> {
        at.checked_sub(1).map(|i| self.chars[i])
    }
}

pub fn stem_once(word: &str) -> String {
    if word.chars().count() <= 2 {
        return word.to_string();
    }
    let mut w = Word { chars: prelude(word), rv: 0, r1: 0, r2: 0 };
    mark_regions(&mut w);

    let altered = standard_suffix(&mut w) || i_verb_suffix(&mut w) || verb_suffix(&mut w);
    if altered {
        if w.ends_with("Y") {
            let n = w.len();
            w.chars[n - 1] = 'i';
        } else if w.ends_with("ç") {
            let n = w.len();
            w.chars[n - 1] = 'c';
        }
    } else {
        residual_suffix(&mut w);
    }
    un_double(&mut w);
    un_accent(&mut w);

    w.chars
        .iter()
        .map(|c| match c {
            'I' => 'i',
            'U' => 'u',
            'Y' => 'y',
            other => *other,
        })
        .collect()
}

fn prelude(word: &str) -> Vec<char> {
    let mut c: Vec<char> = word.chars().collect();
    let n = c.len();
    // Left to right; each test sees marks already made further left.
    for i in 0..n {
        let next = c.get(i + 1).copied();
        if is_vowel(c[i]) {
            match next {
                Some(m @ ('u' | 'i')) if c.get(i + 2).is_some_and(|&x| is_vowel(x)) => {
                    c[i + 1] = m.to_ascii_uppercase();
                    continue;
                }
                Some('y') => {
                    c[i + 1] = 'Y';
                    continue;
                }
                _ => {}
            }
        }
        if c[i] == 'y' && next.is_some_and(is_vowel) {
            c[i] = 'Y';
        } else if c[i] == 'q' && next == Some('u') {
            c[i + 1] = 'U';
        }
    }
    c
}

fn mark_regions(w: &mut Word) {
    let c = &w.chars;
    let n = c.len();
    w.rv = if n >= 2 && is_vowel(c[0]) && is_vowel(c[1]) {
        3.min(n)
    } else if ["par", "col", "tap"].iter().any(|p| c.starts_with(&p.chars().collect::<Vec<_>>())) {
        3
    } else {
        (1..n).find(|&i| is_vowel(c[i])).map_or(n, |i| i + 1)
    };
    let region_after = |from: usize| -> usize {
        (from.max(1)..n).find(|&i| !is_vowel(c[i]) && is_vowel(c[i - 1])).map_or(n, |i| i + 1)
    };
    w.r1 = region_after(0);
    w.r2 = if w.r1 < n { region_after(w.r1 + 1) } else { n };
}

/// Returns true when the word was changed by a rule that ends the step successfully.
/// The `-ment` family alters the word but still falls through to the verb steps.
fn standard_suffix(w: &mut Word) -> bool {
    const SUFFIXES: &[&str] = &[
        "ance",
        "iqUe",
        "isme",
        "able",
        "iste",
        "eux",
        "ances",
        "iqUes",
        "ismes",
        "ables",
        "istes",
        "atrice",
        "ateur",
        "ation",
        "atrices",
        "ateurs",
        "ations",
        "logie",
        "logies",
        "usion",
        "ution",
        "usions",
        "utions",
        "ence",
        "ences",
        "ement",
        "ements",
        "ité",
        "ités",
        "if",
        "ive",
        "ifs",
        "ives",
        "eaux",
        "aux",
        "euse",
        "euses",
        "issement",
        "issements",
        "amment",
        "emment",
        "ment",
        "ments",
    ];
    let Some((suffix, start)) = w.longest(SUFFIXES, 0) else {
        return false;
    };
    let (r1, r2, rv) = (w.r1, w.r2, w.rv);
    match suffix {
        "ance" | "iqUe" | "isme" | "able" | "iste" | "eux" | "ances" | "iqUes" | "ismes" | "ables"
        | "istes" => {
            if start < r2 {
                return false;
            }
            w.truncate(start);
        }
        "atrice" | "ateur" | "ation" | "atrices" | "ateurs" | "ations" => {
            if start < r2 {
                return false;
            }
            w.truncate(start);
            if let Some(ic) = w.suffix_start("ic") {
                if ic >= r2 {
                    w.truncate(ic);
                } else {
                    w.replace_from(ic, "iqU");
                }
            }
        }
        "logie" | "logies" => {
            if start < r2 {
                return false;
            }
            w.replace_from(start, "log");
        }
        "usion" | "ution" | "usions" | "utions" => {
            if start < r2 {
                return false;
            }
            w.replace_from(start, "u");
        }
        "ence" | "ences" => {
            if start < r2 {
                return false;
            }
            w.replace_from(start, "ent");
        }
        "ement" | "ements" => {
            if start < rv {
                return false;
            }
            w.truncate(start);
            if let Some(iv) = w.suffix_start("iv") {
                if iv >= r2 {
                    w.truncate(iv);
                    if let Some(at) = w.suffix_start("at") {
                        if at >= r2 {
                            w.truncate(at);
                        }
                    }
                }
            } else if let Some(eus) = w.suffix_start("eus") {
                if eus >= r2 {
                    w.truncate(eus);
                } else if eus >= r1 {
                    w.replace_from(eus, "eux");
                }
            } else if let Some(p) = w.suffix_start("abl").or_else(|| w.suffix_start("iqU")) {
                if p >= r2 {
                    w.truncate(p);
                }
            } else if let Some(p) = w.suffix_start("ièr").or_else(|| w.suffix_start("Ièr")) {
                if p >= rv {
                    w.replace_from(p, "i");
                }
            }
        }
        "ité" | "ités" => {
            if start < r2 {
                return false;
            }
            w.truncate(start);
            if let Some(p) = w.suffix_start("abil") {
                if p >= r2 {
                    w.truncate(p);
                } else {
                    w.replace_from(p, "abl");
                }
            } else if let Some(p) = w.suffix_start("ic") {
                if p >= r2 {
                    w.truncate(p);
                } else {
                    w.replace_from(p, "iqU");
                }
            } else if let Some(p) = w.suffix_start("iv") {
                if p >= r2 {
                    w.truncate(p);
                }
            }
        }
        "if" | "ive" | "ifs" | "ives" => {
            if start < r2 {
                return false;
            }
            w.truncate(start);
            if let Some(at) = w.suffix_start("at") {
                if at >= r2 {
                    w.truncate(at);
                    if let Some(ic) = w.suffix_start("ic") {
                        if ic >= r2 {
                            w.truncate(ic);
                        } else {
                            w.replace_from(ic, "iqU");
                        }
                    }
                }
            }
        }
        "eaux" => w.replace_from(start, "eau"),
        "aux" => {
            if start < r1 {
                return false;
            }
            w.replace_from(start, "al");
        }
        "euse" | "euses" => {
            if start >= r2 {
                w.truncate(start);
            } else if start >= r1 {
                w.replace_from(start, "eux");
            } else {
                return false;
            }
        }
        "issement" | "issements" => {
            if start < r1 || w.char_before(start).is_none_or(is_vowel) {
                return false;
            }
            w.truncate(start);
        }
        "amment" => {
            if start >= rv {
                w.replace_from(start, "ant");
            }
            return false;
        }
        "emment" => {
            if start >= rv {
                w.replace_from(start, "ent");
            }
            return false;
        }
        "ment" | "ments" => {
            let vowel_in_rv = start > rv && is_vowel(w.chars[start - 1]);
            if vowel_in_rv {
                w.truncate(start);
            }
            return false;
        }
        _ => unreachable!("suffix table and match arms out of sync"),
    }
    true
}

fn i_verb_suffix(w: &mut Word) -> bool {
    const SUFFIXES: &[&str] = &[
        "îmes", "ît", "îtes", "i", "ie", "ies", "ir", "ira", "irai", "iraIent", "irais", "irait", "iras",
        "irent", "irez", "iriez", "irions", "irons", "iront", "is", "issaIent", "issais", "issait", "issant",
        "issante", "issantes", "issants", "isse", "issent", "isses", "issez", "issiez", "issions", "issons",
        "it",
    ];
    let Some((_, start)) = w.longest(SUFFIXES, w.rv) else {
        return false;
    };
    // the preceding non-vowel must itself lie inside RV
    match w.char_before(start) {
        Some(c) if start > w.rv && !is_vowel(c) => {
            w.truncate(start);
            true
        }
        _ => false,
    }
}

fn verb_suffix(w: &mut Word) -> bool {
    const SUFFIXES: &[&str] = &[
        "ions", "é", "ée", "ées", "és", "èrent", "er", "era", "erai", "eraIent", "erais", "erait", "eras",
        "erez", "eriez", "erions", "erons", "eront", "ez", "iez", "âmes", "ât", "âtes", "a", "ai", "aIent",
        "ais", "ait", "ant", "ante", "antes", "ants", "as", "asse", "assent", "asses", "assiez", "assions",
    ];
    let Some((suffix, start)) = w.longest(SUFFIXES, w.rv) else {
        return false;
    };
    match suffix {
        "ions" => {
            if start < w.r2 {
                return false;
            }
            w.truncate(start);
        }
        "é" | "ée" | "ées" | "és" | "èrent" | "er" | "era" | "erai" | "eraIent" | "erais" | "erait"
        | "eras" | "erez" | "eriez" | "erions" | "erons" | "eront" | "ez" | "iez" => {
            w.truncate(start);
        }
        _ => {
            w.truncate(start);
            if let Some(e) = w.suffix_start("e") {
                if e >= w.rv {
                    w.truncate(e);
                }
            }
        }
    }
    true
}

fn residual_suffix(w: &mut Word) {
    if let Some(s) = w.suffix_start("s") {
        if w.char_before(s).is_some_and(|c| !"aiouès".contains(c)) {
            w.truncate(s);
        }
    }
    const SUFFIXES: &[&str] = &["ion", "ier", "ière", "Ier", "Ière", "e", "ë"];
    let Some((suffix, start)) = w.longest(SUFFIXES, w.rv) else {
        return;
    };
    match suffix {
        "ion" => {
            let st = start > w.rv && matches!(w.char_before(start), Some('s') | Some('t'));
            if start >= w.r2 && st {
                w.truncate(start);
            }
        }
        "ier" | "ière" | "Ier" | "Ière" => w.replace_from(start, "i"),
        "e" => w.truncate(start),
        "ë" => {
            if start >= w.rv + 2 && w.chars[start - 2..start] == ['g', 'u'] {
                w.truncate(start);
            }
        }
        _ => unreachable!(),
    }
}

fn un_double(w: &mut Word) {
    if ["enn", "onn", "ett", "ell", "eill"].iter().any(|s| w.ends_with(s)) {
        w.chars.pop();
    }
}

fn un_accent(w: &mut Word) {
    let mut i = w.len();
    while i > 0 && !is_vowel(w.chars[i - 1]) {
        i -= 1;
    }
    if i < w.len() && i > 0 && matches!(w.chars[i - 1], 'é' | 'è') {
        w.chars[i - 1] = 'e';
    }
}
