//! Config-driven front end for the `lzs` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;

pub use config::{resolve, ExperimentConfig, Resolved};
pub use error::{CliError, CliResult};
pub use run::{run_file, run_resolved, RunReport};

use lzs_core::presets;
use serde_json::json;

/// One line per preset: name and description.
pub fn list_presets_text() -> String {
    let all = presets::all();
    let width = all.iter().map(|p| p.name.len()).max().unwrap_or(0);
    all.iter()
        .map(|p| format!("{:width$}  {}\n", p.name, p.description))
        .collect()
}

pub fn list_presets_json() -> String {
    let v: Vec<_> = presets::all()
        .into_iter()
        .map(|p| {
            json!({
                "name": p.name,
                "description": p.description,
                "params": p.params(),
                "duration": p.duration(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&v).expect("presets serialize")
}

/// Parses and resolves without integrating anything.
pub fn validate_file(path: &std::path::Path) -> CliResult<Resolved> {
    let cfg = ExperimentConfig::load(path)?;
    resolve(&cfg)
}
