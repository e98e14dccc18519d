//! Shared model loading for the benchmarks.

use std::path::PathBuf;

use plsynth_core::lang::{parse_sources, resolve, ResolveOptions};
use plsynth_core::Model;

pub const COFFEE: &[&str] = &[
    "coffee/features_dynamic.fsc",
    "coffee/strict.fsc",
    "coffee/components.fsc",
    "coffee/link.fsc",
    "coffee/requirements.fsc",
];

pub const BCS_STATIC: &[&str] = &[
    "bcs/features_static.fsc",
    "bcs/components.fsc",
    "bcs/presence.fsc",
    "bcs/locking.fsc",
    "bcs/requirements.fsc",
];

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

/// Parses and resolves files from the repository's `models/` directory.
pub fn load(files: &[&str]) -> Model {
    let texts: Vec<(String, String)> = files
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(models_dir().join(f)).unwrap_or_else(|e| panic!("{f}: {e}"));
            (f.to_string(), text)
        })
        .collect();
    let spec = parse_sources(texts.iter().map(|(a, b)| (a.as_str(), b.as_str()))).expect("parse");
    resolve(&spec, &ResolveOptions::default()).expect("resolve")
}
