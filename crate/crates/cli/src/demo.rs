//! Synthetic two-outlet demo data set.
//!
//! Twenty three-seat constituencies with three candidates per party, one
//! English and one French outlet, and per-constituency coverage arranged so
//! the forecast reproduces a fixed seat table (Lepep 23, ADC 37). Each
//! outlet also favours one party leader, which the bias step removes.
//! A few pages exercise the ingest filters: syndicated copies, a sports
//! mention, an undated page, an out-of-range page and one naming nobody.
//!
//! Gold labels come from the intended sentiment of each page, with every
//! ninth pair flipped so evaluation has something to find.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Weekday};

use seatcast_core::sentiment::Sentiment;
use seatcast_core::{Error, Result};

use crate::config::PipelineConfig;
use crate::manifest::Manifest;
use crate::pipeline::{self as p, IngestInputs};

pub const CONFIG_FILE: &str = "seatcast.toml";

const PARTIES: [(&str, &str); 2] = [("lepep", "L'Alliance Lepep"), ("adc", "L'Alliance Du Changement")];

/// Seats per constituency, Lepep first.
#[rustfmt::skip]
pub const SEAT_TABLE: [(u32, u32); 20] = [
    (1, 2), (0, 3), (0, 3), (2, 1), (1, 2), (1, 2), (2, 1), (2, 1), (1, 2), (2, 1),
    (2, 1), (1, 2), (2, 1), (2, 1), (0, 3), (0, 3), (1, 2), (2, 1), (1, 2), (0, 3),
];

/// Constituency (index) whose Lepep candidates get no coverage, so the
/// forecast falls back to the national Lepep score there.
pub const UNCOVERED: usize = 16;

const FIRST: [&str; 15] = [
    "Anand", "Bernard", "Chitra", "Devika", "Emilie", "Farid", "Gilles", "Hema", "Ismael", "Josiane", "Kavi",
    "Lina", "Marc", "Nadia", "Olivier",
];
const SURNAME_HEAD: [&str; 10] = ["Bal", "Dor", "Fal", "Gun", "Hal", "Jor", "Kol", "Lum", "Mar", "Nob"];
const SURNAME_TAIL: [&str; 4] = ["ramsing", "senty", "linval", "pattoo"];

const LEADERS: [(&str, &str); 2] = [("lepep-leader", "Octave Rambert"), ("adc-leader", "Priya Lacaze")];

fn candidate_name(i: usize) -> String {
    let s = i % 40;
    format!("{} {}{}", FIRST[i % 15], SURNAME_HEAD[s / 4], SURNAME_TAIL[s % 4])
}

fn entity_id(c: usize, party: &str, j: usize) -> String {
    format!("c{:02}-{party}-{}", c + 1, j + 1)
}

/// (positive, negative, neutral) label counts for a party's candidates,
/// before the per-constituency multiplier.
fn coverage(seats: (u32, u32), lepep: bool) -> (usize, usize, usize) {
    match (seats, lepep) {
        ((0, 3), true) => (0, 4, 1),
        ((0, 3), false) => (2, 0, 2),
        ((1, 2), true) | ((2, 1), false) => (1, 2, 1),
        ((1, 2), false) | ((2, 1), true) => (2, 1, 1),
        _ => unreachable!("seat table only uses 0-3, 1-2 and 2-1"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outlet {
    Lexpress,
    Defimedia,
}

impl Outlet {
    fn id(self) -> &'static str {
        match self {
            Outlet::Lexpress => "lexpress",
            Outlet::Defimedia => "defimedia",
        }
    }
}

struct Page {
    outlet: Outlet,
    file: String,
    slug: String,
    title: String,
    paragraphs: Vec<String>,
    /// Local time; `None` leaves the date out of the page.
    published: Option<NaiveDateTime>,
    /// Entity and sentiment the page is written to convey.
    intent: Option<(String, Sentiment)>,
}

fn day(offset: i64, serial: usize) -> NaiveDateTime {
    let d = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap() + Duration::days(offset);
    d.and_hms_opt(7 + (serial % 12) as u32, ((serial * 13) % 60) as u32, 0).unwrap()
}

fn weekday_en(d: NaiveDate) -> &'static str {
    match d.weekday() {
        Weekday::Mon => "Monday",
        Weekday::Tue => "Tuesday",
        Weekday::Wed => "Wednesday",
        Weekday::Thu => "Thursday",
        Weekday::Fri => "Friday",
        Weekday::Sat => "Saturday",
        Weekday::Sun => "Sunday",
    }
}

const JOURS: [&str; 7] = ["lundi", "mardi", "mercredi", "jeudi", "vendredi", "samedi", "dimanche"];
const MOIS: [&str; 12] = [
    "janvier",
    "février",
    "mars",
    "avril",
    "mai",
    "juin",
    "juillet",
    "août",
    "septembre",
    "octobre",
    "novembre",
    "décembre",
];

fn text(
    outlet: Outlet,
    s: Sentiment,
    name: &str,
    place: &str,
    when: NaiveDate,
    serial: usize,
) -> (String, Vec<String>) {
    match outlet {
        Outlet::Lexpress => {
            let body = match s {
                Sentiment::Pos => format!(
                    "Residents praised {name} after a strong campaign meeting in {place}. \
                     Observers described the candidate as honest and the turnout as excellent."
                ),
                Sentiment::Neg => format!(
                    "{name} faced criticism in {place} as the campaign was overshadowed by a corruption scandal. \
                     Voters complained about the waste of public funds."
                ),
                Sentiment::Neu => format!(
                    "{name} held a campaign meeting in {place} on {}. \
                     The candidate spoke to residents about roads and schools.",
                    weekday_en(when)
                ),
            };
            (format!("Campaign diary: {place}"), vec![body, format!("Campaign diary entry {serial}.")])
        }
        Outlet::Defimedia => {
            let body = match s {
                Sentiment::Pos => format!(
                    "Les habitants ont salué {name} après une réunion de campagne solide à {place}. \
                     Les observateurs jugent le candidat honnête et la mobilisation excellente."
                ),
                Sentiment::Neg => format!(
                    "{name} fait face à des critiques à {place} : la campagne est marquée par un scandale de corruption. \
                     Les électeurs dénoncent le gaspillage et l'échec du projet."
                ),
                Sentiment::Neu => format!(
                    "{name} a tenu une réunion de campagne à {place} ce {}. \
                     Le candidat a parlé aux habitants des routes et des écoles.",
                    JOURS[when.weekday().num_days_from_monday() as usize]
                ),
            };
            (
                format!("Carnet de campagne : {place}"),
                vec![body, format!("Carnet de campagne numéro {serial}.")],
            )
        }
    }
}

fn place(outlet: Outlet, c: Option<usize>) -> String {
    match (outlet, c) {
        (Outlet::Lexpress, Some(c)) => format!("Constituency {}", c + 1),
        (Outlet::Defimedia, Some(c)) => format!("la circonscription {}", c + 1),
        (_, None) => "Port Louis".into(),
    }
}

struct Builder {
    pages: Vec<Page>,
    serial: usize,
}

impl Builder {
    fn article(
        &mut self,
        outlet: Outlet,
        entity: &str,
        name: &str,
        c: Option<usize>,
        s: Sentiment,
        published: NaiveDateTime,
    ) {
        self.serial += 1;
        let serial = self.serial;
        let (title, paragraphs) = text(outlet, s, name, &place(outlet, c), published.date(), serial);
        self.pages.push(Page {
            outlet,
            file: format!("a{serial:04}.html"),
            slug: format!("politics/{serial:04}"),
            title,
            paragraphs,
            published: Some(published),
            intent: Some((entity.to_string(), s)),
        });
    }
}

fn build_pages() -> Vec<Page> {
    let mut b = Builder { pages: Vec::new(), serial: 0 };

    // Leaders: each outlet leans towards one of them, early in the year so
    // the whole sample falls in the training split.
    for (o, outlet) in [Outlet::Lexpress, Outlet::Defimedia].into_iter().enumerate() {
        for (l, (id, name)) in LEADERS.iter().enumerate() {
            let favoured = (o == 0) == (l == 1);
            let (pos, neg) = if favoured { (9, 3) } else { (3, 9) };
            let mix = [(Sentiment::Pos, pos), (Sentiment::Neg, neg), (Sentiment::Neu, 3)];
            for (k, s) in mix.iter().flat_map(|&(s, n)| std::iter::repeat_n(s, n)).enumerate() {
                let when = day(3 + ((k * 9 + l * 4 + o) % 120) as i64, b.serial);
                b.article(outlet, id, name, None, s, when);
            }
        }
    }

    let mut i = 0;
    for (c, &seats) in SEAT_TABLE.iter().enumerate() {
        let k = 1 + c % 2;
        for (pi, (party, _)) in PARTIES.iter().enumerate() {
            let lepep = pi == 0;
            if lepep && c == UNCOVERED {
                continue;
            }
            let (pos, neg, neu) = coverage(seats, lepep);
            let mix = [(Sentiment::Pos, pos * k), (Sentiment::Neg, neg * k), (Sentiment::Neu, neu * k)];
            for (j, s) in mix.iter().flat_map(|&(s, n)| std::iter::repeat_n(s, n)).enumerate() {
                let cand = j % 3;
                let name = candidate_name(c * 6 + pi * 3 + cand);
                let outlet = if (j + c) % 2 == 0 { Outlet::Lexpress } else { Outlet::Defimedia };
                // Late good news for ADC and late bad news for Lepep give
                // the trend a direction; some neutral coverage is late too.
                let late = (!lepep && s == Sentiment::Pos)
                    || (lepep && s == Sentiment::Neg)
                    || (s == Sentiment::Neu && i % 3 == 0);
                i += 1;
                let offset = if late { 150 + (i * 37) % 150 } else { 5 + (i * 29) % 140 };
                b.article(
                    outlet,
                    &entity_id(c, party, cand),
                    &name,
                    Some(c),
                    s,
                    day(offset as i64, b.serial),
                );
            }
        }
    }

    // Syndicated copies of two stories, republished later by the other outlet.
    for src in [20, 75] {
        let orig = &b.pages[src];
        let copy = Page {
            outlet: if orig.outlet == Outlet::Lexpress { Outlet::Defimedia } else { Outlet::Lexpress },
            file: format!("s{src:04}.html"),
            slug: format!("syndicated/{src:04}"),
            title: orig.title.clone(),
            paragraphs: orig.paragraphs.clone(),
            published: orig.published.map(|t| t + Duration::days(2)),
            intent: None,
        };
        b.pages.push(copy);
    }
    let sports_name = candidate_name(4 * 6 + 3);
    let noise = [
        (
            "n0001.html",
            "Rose-Hill edge Curepipe",
            format!(
                "{sports_name} scored twice as Rose-Hill beat Curepipe in the football league on Sunday."
            ),
            Some(day(40, 1)),
        ),
        (
            "n0002.html",
            "Campaign calendar published",
            "The electoral commission published the campaign calendar and the list of polling stations."
                .to_string(),
            Some(day(60, 2)),
        ),
        (
            "n0003.html",
            "Campaign diary: archive",
            format!("{} held a campaign meeting in Constituency 2.", candidate_name(6)),
            None,
        ),
        (
            "n0004.html",
            "Campaign diary: last year",
            format!("{} held a campaign meeting in Constituency 3.", candidate_name(12)),
            Some(day(-20, 3)),
        ),
    ];
    for (file, title, body, published) in noise {
        b.pages.push(Page {
            outlet: Outlet::Lexpress,
            file: file.into(),
            slug: format!("misc/{}", file.trim_end_matches(".html")),
            title: title.into(),
            paragraphs: vec![body],
            published,
            intent: None,
        });
    }
    b.pages
}

fn escape(s: &str) -> String {
    html_escape::encode_text(s).into_owned()
}

fn render(page: &Page) -> String {
    let mut h = String::new();
    let paras: String = page.paragraphs.iter().map(|p| format!("      <p>{}</p>\n", escape(p))).collect();
    match page.outlet {
        Outlet::Lexpress => {
            let dateline = page.published.map_or_else(String::new, |t| {
                format!(
                    "      <div class=\"dateline\"><time datetime=\"{}+04:00\">{} {} {}</time></div>\n",
                    t.format("%Y-%m-%dT%H:%M:%S"),
                    t.day(),
                    t.format("%B"),
                    t.year()
                )
            });
            let _ = write!(
                h,
                "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n  <meta charset=\"utf-8\">\n  <title>{title} | L'Express</title>\n  \
                 <link rel=\"canonical\" href=\"https://lexpress.example/{slug}.html\">\n</head>\n<body>\n  \
                 <header class=\"site-header\"><div class=\"logo\">L'Express</div><p>Mauritius news since 1963</p></header>\n  \
                 <nav class=\"menu\"><a href=\"/\">Home</a> <a href=\"/politics\">Politics</a> <a href=\"/sports\">Sports</a></nav>\n  \
                 <main>\n    <article>\n      <h1>{title}</h1>\n{dateline}{paras}      \
                 <div class=\"share\"><p>Share on Facebook</p><p>Share on X</p></div>\n    </article>\n    \
                 <aside class=\"related\"><p>Most read: weather warning lifted</p></aside>\n  </main>\n  \
                 <footer><p>Copyright 2024 L'Express. All rights reserved.</p></footer>\n</body>\n</html>\n",
                title = escape(&page.title),
                slug = page.slug,
            );
        }
        Outlet::Defimedia => {
            let dateline = page.published.map_or_else(String::new, |t| {
                format!(
                    "      <div class=\"byline\">Publié le <span class=\"date\">{} {:02} {} {}, {}</span></div>\n",
                    JOURS[t.weekday().num_days_from_monday() as usize],
                    t.day(),
                    MOIS[t.month0() as usize],
                    t.year(),
                    t.format("%H:%M")
                )
            });
            let _ = write!(
                h,
                "<!DOCTYPE html>\n<html lang=\"fr\">\n<head>\n  <meta charset=\"utf-8\">\n  <title>{title} - Defimedia</title>\n  \
                 <link rel=\"canonical\" href=\"https://defimedia.example/{slug}\">\n</head>\n<body>\n  \
                 <header><div class=\"brand\">Defimedia</div><p>L'info en continu</p></header>\n  \
                 <div class=\"breadcrumb\"><a href=\"/\">Accueil</a> / <a href=\"/politique\">Politique</a></div>\n  \
                 <div class=\"content\">\n    <h1>{title}</h1>\n{dateline}{paras}    \
                 <div class=\"social-share\"><p>Partager sur Facebook</p></div>\n    \
                 <div class=\"comments\"><p>Aucun commentaire pour le moment.</p></div>\n  </div>\n  \
                 <footer><p>Tous droits réservés.</p></footer>\n</body>\n</html>\n",
                title = escape(&page.title),
                slug = page.slug,
            );
        }
    }
    h
}

fn roster_toml() -> String {
    let mut r =
        String::from("# Demo roster: fictional parties' candidates in 20 three-seat constituencies.\n");
    for (id, name) in PARTIES {
        let _ = write!(r, "\n[[party]]\nid = \"{id}\"\nname = \"{name}\"\n");
    }
    for c in 0..SEAT_TABLE.len() {
        let _ = write!(
            r,
            "\n[[constituency]]\nid = \"c{:02}\"\nname = \"Constituency {}\"\nmagnitude = 3\n",
            c + 1,
            c + 1
        );
    }
    for (pi, (party, _)) in PARTIES.iter().enumerate() {
        let (id, name) = LEADERS[pi];
        let _ = write!(
            r,
            "\n[[entity]]\nid = \"{id}\"\nname = \"{name}\"\nparty = \"{party}\"\naliases = [\"{name}\"]\n"
        );
    }
    for c in 0..SEAT_TABLE.len() {
        for (pi, (party, _)) in PARTIES.iter().enumerate() {
            for j in 0..3 {
                let name = candidate_name(c * 6 + pi * 3 + j);
                let _ = write!(
                    r,
                    "\n[[entity]]\nid = \"{}\"\nname = \"{name}\"\nparty = \"{party}\"\naliases = [\"{name}\"]\nconstituency = \"c{:02}\"\n",
                    entity_id(c, party, j),
                    c + 1
                );
            }
        }
    }
    r
}

const CONFIG: &str = r#"# Demo pipeline: two local outlets, lexicon labels, evaluation against gold labels.
roster = "roster.toml"
output_dir = "out"
gold_labels = "gold_labels.csv"
context_keywords = ["election*", "élection*", "campaign*", "campagne*", "candidat*", "candidate*", "vote*", "voter*", "électeur*", "parliament*", "parlement*"]

[date_range]
from = "2024-01-01"
to = "2024-11-09"

[params]
window = 25
tau = 0.0
min_support = 10
split_ratio = 0.8
relevance_window = 50

[trend]
from = "2024-W27"
to = "2024-W44"

[[outlet]]
id = "lexpress"
local_dir = "outlets/lexpress"
language = "EN"
date_selector = "time"
date_attribute = "datetime"

[[outlet]]
id = "defimedia"
local_dir = "outlets/defimedia"
language = "FR"
date_selector = "span.date"
date_formats = ["%A %d %B %Y, %H:%M"]
utc_offset_minutes = 240
"#;

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn rotate(s: Sentiment) -> Sentiment {
    match s {
        Sentiment::Pos => Sentiment::Neg,
        Sentiment::Neg => Sentiment::Neu,
        Sentiment::Neu => Sentiment::Pos,
    }
}

/// Writes the data set into `out` and returns the files written.
pub fn write(out: &Path) -> Result<Vec<PathBuf>> {
    let pages = build_pages();
    let mut written = Vec::new();
    let mut put = |rel: &str, bytes: &[u8]| -> Result<()> {
        let path = out.join(rel);
        write_file(&path, bytes)?;
        written.push(path);
        Ok(())
    };
    put(CONFIG_FILE, CONFIG.as_bytes())?;
    put("roster.toml", roster_toml().as_bytes())?;
    for page in &pages {
        put(&format!("outlets/{}/{}", page.outlet.id(), page.file), render(page).as_bytes())?;
    }

    // Gold labels are keyed by article id, so run ingest and the classifier
    // over the pages just written and check they recover every intent.
    let cfg_path = out.join(CONFIG_FILE);
    let mut cfg = PipelineConfig::load(&cfg_path)?;
    cfg.gold_labels = None;
    let roster = seatcast_core::roster::Roster::parse(&roster_toml())?;
    let mut scratch = Manifest::default();
    let text = p::TextOptions { window: cfg.params.window, tau: cfg.params.tau, ..Default::default() };
    let classifier = text.classifier(&mut scratch, out)?;
    let stopwords = text.stopwords(&mut scratch, out)?;
    let report = p::run_ingest(&IngestInputs {
        outlets: &cfg.outlets,
        window: cfg.window(),
        roster: &roster,
        keywords: &cfg.context_keywords,
        relevance_window: cfg.params.relevance_window,
        stopwords: &stopwords,
    })?;
    let labels = p::run_classify(&report.articles, &roster, &classifier, None)?;

    let intents: HashMap<String, &(String, Sentiment)> = pages
        .iter()
        .filter_map(|pg| {
            let url = match pg.outlet {
                Outlet::Lexpress => format!("https://lexpress.example/{}.html", pg.slug),
                Outlet::Defimedia => format!("https://defimedia.example/{}", pg.slug),
            };
            pg.intent.as_ref().map(|i| (url, i))
        })
        .collect();
    let urls: HashMap<&str, &str> = report.articles.iter().map(|a| (a.id.as_str(), a.url.as_str())).collect();
    let expected = intents.len();
    let mut gold: BTreeMap<(String, String), Sentiment> = BTreeMap::new();
    let mut problems = Vec::new();
    for l in &labels {
        let intent = urls.get(l.label.article_id.as_str()).and_then(|u| intents.get(*u));
        match intent {
            Some((entity, s)) if *entity == l.label.entity_id && *s == l.label.sentiment => {
                gold.insert(l.label.key(), *s);
            }
            _ => problems
                .push(format!("{} / {}: {}", l.label.article_id, l.label.entity_id, l.label.sentiment)),
        }
    }
    if !problems.is_empty() || gold.len() != expected {
        return Err(Error::Data(format!(
            "demo pages do not classify as intended ({} of {expected} recovered): {}",
            gold.len(),
            problems.join("; ")
        )));
    }
    let mut csv = String::from("article_id,entity_id,sentiment,confidence\n");
    for (i, ((article_id, entity_id), s)) in gold.into_iter().enumerate() {
        let s = if i % 9 == 4 { rotate(s) } else { s };
        let _ = writeln!(csv, "{article_id},{entity_id},{},1.0", s.word());
    }
    put("gold_labels.csv", csv.as_bytes())?;
    Ok(written)
}
