#![allow(dead_code)]

use plsynth_core::lang::{parse_sources, resolve, ResolveOptions};
use plsynth_core::Model;

pub const COFFEE: &[&str] = &[
    "coffee/features_dynamic.fsc",
    "coffee/strict.fsc",
    "coffee/components.fsc",
    "coffee/link.fsc",
    "coffee/requirements.fsc",
];

pub fn model_path(name: &str) -> String {
    format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(model_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn from_texts(texts: &[(&str, &str)]) -> Model {
    let spec = parse_sources(texts.iter().copied()).unwrap_or_else(|e| panic!("{e}"));
    resolve(&spec, &ResolveOptions::default()).unwrap_or_else(|e| panic!("{e}"))
}

pub fn texts(files: &[&str]) -> Vec<(String, String)> {
    files.iter().map(|f| (f.to_string(), read(f))).collect()
}

/// Resolves model files from the repository's `models/` directory, plus extra sources.
pub fn load(files: &[&str], extra: &[(&str, &str)]) -> Model {
    let owned = texts(files);
    let mut all: Vec<(&str, &str)> = owned.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    all.extend_from_slice(extra);
    from_texts(&all)
}

pub const COFFEE_GUARDS: &str = include_str!("../data/coffee_guards.tsv");
pub const COFFEE_CANCEL_GUARD: &str = include_str!("../data/coffee_cancel_guard.tsv");

/// Expected guards that differ from the synthesized ones on reachable states where the
/// plants and requirement automata allow the event.
pub fn guard_mismatches(syn: &mut plsynth_core::Synthesis<'_>, expected: &str) -> Vec<String> {
    use plsynth_core::symbolic::FALSE;
    let good = syn.good();
    let controlled = syn.controlled();
    let model = syn.sm.model;
    let sm = &mut syn.sm;
    let raw = sm.supervisor_guards(good);
    let mut out = Vec::new();
    for line in expected.lines().filter(|l| !l.trim().is_empty()) {
        let (name, text) = line.split_once('\t').expect("event<TAB>guard");
        let event = model.event(name).unwrap_or_else(|| panic!("unknown event {name}"));
        let Some(ev) = sm.events.iter().position(|r| r.event == event) else {
            out.push(format!("{name}: not encoded"));
            continue;
        };
        let Some(&(_, g)) = raw.iter().find(|r| r.0 == event) else {
            out.push(format!("{name}: no guard"));
            continue;
        };
        let e = plsynth_core::lang::resolve_expr(model, text).unwrap_or_else(|err| panic!("{name}: {err}"));
        let want = sm.bool_expr(&e).unwrap();
        let plant = sm.plant_enabled(ev);
        let req = sm.req_enabled(ev);
        let care = sm.store.and_all([controlled, plant, req]);
        let diff = sm.store.xor(g, want);
        if sm.store.and(diff, care) != FALSE {
            out.push(name.to_string());
        }
    }
    out
}
