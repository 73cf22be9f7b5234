//! Command-line driver: configuration, stage orchestration, run manifests
//! and the bundled demo data set.

pub mod commands;
pub mod config;
pub mod demo;
pub mod manifest;
pub mod pipeline;
