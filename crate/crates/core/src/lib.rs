//! Forecast two-party seat outcomes from the sentiment of news coverage.
//!
//! The pipeline runs ingest → text preparation → per-entity sentiment labels
//! → net sentiment score and impact score → outlet bias normalization →
//! weekly series → per-constituency seat allocation → reports.

pub mod bias;
pub mod error;
pub mod forecast;
pub mod ingest;
pub mod roster;
pub mod scoring;
pub mod sentiment;
pub mod text;
pub mod window;

pub use error::{Error, Result};
