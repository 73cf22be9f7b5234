//! Parties, candidate entities and constituencies.
//!
//! The roster file is TOML:
//!
//! ```toml
//! [[party]]
//! id = "lepep"
//! name = "L'Alliance Lepep"
//!
//! [[constituency]]
//! id = "c01"
//! name = "Constituency 1"
//! magnitude = 3
//!
//! [[entity]]
//! id = "c01-lepep-1"
//! name = "Anil Beeharry"
//! party = "lepep"
//! aliases = ["Anil Beeharry", "Beeharry"]
//! constituency = "c01"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::fold;

pub const DEFAULT_MAGNITUDE: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityDef {
    #[serde(rename = "id")]
    pub entity_id: String,
    #[serde(rename = "name")]
    pub display_name: String,
    #[serde(rename = "party")]
    pub party_id: String,
    pub aliases: Vec<String>,
    #[serde(rename = "constituency", default)]
    pub constituency_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituencyDef {
    #[serde(rename = "id")]
    pub constituency_id: String,
    pub name: String,
    #[serde(default = "default_magnitude")]
    pub magnitude: u32,
    /// party id → candidate entity ids; filled from the entity list.
    #[serde(skip)]
    pub candidates: BTreeMap<String, Vec<String>>,
}

fn default_magnitude() -> u32 {
    DEFAULT_MAGNITUDE
}

impl ConstituencyDef {
    pub fn candidates_of(&self, party_id: &str) -> &[String] {
        self.candidates.get(party_id).map_or(&[], Vec::as_slice)
    }
}

#[derive(Debug, Deserialize)]
struct RosterFile {
    #[serde(rename = "party")]
    parties: Vec<Party>,
    #[serde(rename = "constituency", default)]
    constituencies: Vec<ConstituencyDef>,
    #[serde(rename = "entity", default)]
    entities: Vec<EntityDef>,
}

#[derive(Debug, Clone)]
pub struct Roster {
    parties: Vec<Party>,
    entities: Vec<EntityDef>,
    constituencies: Vec<ConstituencyDef>,
    entity_index: BTreeMap<String, usize>,
}

impl Roster {
    pub fn new(
        parties: Vec<Party>,
        entities: Vec<EntityDef>,
        mut constituencies: Vec<ConstituencyDef>,
    ) -> Result<Self> {
        if parties.len() != 2 {
            return Err(Error::Config(format!(
                "roster must declare exactly two parties, found {}",
                parties.len()
            )));
        }
        if parties[0].id == parties[1].id {
            return Err(Error::Config(format!("duplicate party `{}`", parties[0].id)));
        }
        let mut seen = BTreeSet::new();
        for c in &constituencies {
            if !seen.insert(c.constituency_id.clone()) {
                return Err(Error::Config(format!("duplicate constituency `{}`", c.constituency_id)));
            }
            if c.magnitude < 1 {
                return Err(Error::Config(format!("constituency `{}` has magnitude 0", c.constituency_id)));
            }
        }
        let mut entity_index = BTreeMap::new();
        for (i, e) in entities.iter().enumerate() {
            if entity_index.insert(e.entity_id.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate entity `{}`", e.entity_id)));
            }
            if !parties.iter().any(|p| p.id == e.party_id) {
                return Err(Error::Config(format!(
                    "entity `{}` refers to unknown party `{}`",
                    e.entity_id, e.party_id
                )));
            }
            if e.aliases.is_empty() || e.aliases.iter().any(|a| fold(a).trim().is_empty()) {
                return Err(Error::Config(format!(
                    "entity `{}` needs at least one non-blank alias",
                    e.entity_id
                )));
            }
            if let Some(cid) = &e.constituency_id {
                let c = constituencies.iter_mut().find(|c| &c.constituency_id == cid).ok_or_else(|| {
                    Error::Config(format!("entity `{}` refers to unknown constituency `{cid}`", e.entity_id))
                })?;
                c.candidates.entry(e.party_id.clone()).or_default().push(e.entity_id.clone());
            }
        }
        Ok(Self { parties, entities, constituencies, entity_index })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: RosterFile = toml::from_str(text).map_err(|e| Error::Config(format!("roster: {e}")))?;
        Self::new(file.parties, file.entities, file.constituencies)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read roster {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn party_ids(&self) -> [&str; 2] {
        [&self.parties[0].id, &self.parties[1].id]
    }

    pub fn entities(&self) -> &[EntityDef] {
        &self.entities
    }

    pub fn entity(&self, id: &str) -> Option<&EntityDef> {
        self.entity_index.get(id).map(|&i| &self.entities[i])
    }

    pub fn constituencies(&self) -> &[ConstituencyDef] {
        &self.constituencies
    }

    pub fn total_seats(&self) -> u32 {
        self.constituencies.iter().map(|c| c.magnitude).sum()
    }

    /// Constituencies where one of the parties fields no candidate.
    pub fn uncontested(&self) -> Vec<&str> {
        self.constituencies
            .iter()
            .filter(|c| self.parties.iter().any(|p| c.candidates_of(&p.id).is_empty()))
            .map(|c| c.constituency_id.as_str())
            .collect()
    }
}
