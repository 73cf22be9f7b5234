//! Run manifests: input digests, parameters and tool version, with no
//! timestamps, so identical runs produce identical manifests.

use std::collections::BTreeMap;

use serde::Serialize;

use seatcast_core::ingest::sha256_hex;

#[derive(Debug, Default, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    /// Input path → SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Output file name → SHA-256.
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.insert(name.into(), sha256_hex(bytes));
    }

    pub fn output(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.outputs.insert(name.into(), sha256_hex(bytes));
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s.into_bytes()
    }
}
