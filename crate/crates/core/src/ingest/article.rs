use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::text::Language;

/// One news item. Field order is the corpus JSONL column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Article {
    pub id: String,
    pub outlet: String,
    pub url: String,
    #[serde(with = "utc_seconds")]
    pub published_at: DateTime<Utc>,
    pub language: Language,
    pub title: String,
    pub body: String,
    pub matched_entities: BTreeSet<String>,
}

impl Article {
    /// Builds an article whose id is derived from its text.
    pub fn new(
        outlet: impl Into<String>,
        url: impl Into<String>,
        published_at: DateTime<Utc>,
        language: Language,
        title: impl Into<String>,
        body: impl Into<String>,
    ) -> Self {
        let title = title.into();
        let body = body.into();
        Self {
            id: content_id(&title, &body),
            outlet: outlet.into(),
            url: url.into(),
            published_at: truncate_to_second(published_at),
            language,
            title,
            body,
            matched_entities: BTreeSet::new(),
        }
    }
}

pub fn truncate_to_second(t: DateTime<Utc>) -> DateTime<Utc> {
    DateTime::from_timestamp(t.timestamp(), 0).expect("in-range timestamp")
}

/// Lowercased, punctuation-stripped, whitespace-collapsed text used as the
/// dedup key.
pub fn normalize_for_id(title: &str, body: &str) -> String {
    let joined = format!("{title}\n{body}").to_lowercase();
    joined
        .chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Hex SHA-256 of the normalized text.
pub fn content_id(title: &str, body: &str) -> String {
    sha256_hex(normalize_for_id(title, body).as_bytes())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub mod utc_seconds {
    use chrono::{DateTime, NaiveDateTime, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub const FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

    pub fn format(t: DateTime<Utc>) -> String {
        t.format(FORMAT).to_string()
    }

    pub fn serialize<S: Serializer>(t: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(*t))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        parse(&raw).map_err(serde::de::Error::custom)
    }

    /// Accepts RFC 3339 with any offset (converted to UTC) or a naive
    /// `YYYY-MM-DDTHH:MM:SS` taken as UTC. Sub-second parts are dropped.
    pub fn parse(raw: &str) -> Result<DateTime<Utc>, String> {
        DateTime::parse_from_rfc3339(raw)
            .map(|t| t.with_timezone(&Utc))
            .or_else(|_| NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S").map(|n| n.and_utc()))
            .map(super::truncate_to_second)
            .map_err(|_| format!("published_at `{raw}` is not an ISO-8601 UTC timestamp"))
    }
}
