use std::path::PathBuf;

use clap::Args;
use plsynth_core::lang::{parse_sources, resolve, ResolveOptions};
use plsynth_core::synthesis::Engine;
use plsynth_core::Model;

use crate::Failure;

/// Options shared by every command.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Specification files, concatenated into one model.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// explicit, symbolic or auto.
    #[arg(long, default_value = "auto")]
    pub engine: Engine,
    /// Maximum number of explicit states.
    #[arg(long, default_value_t = 5_000_000, value_parser = positive)]
    pub budget: usize,
    /// Domain of `int` variables declared without a range, as `lo..hi`.
    #[arg(long, value_parser = int_range)]
    pub int_range: Option<(i64, i64)>,
    /// Print `key=value` lines instead of prose.
    #[arg(long)]
    pub structured: bool,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn int_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected `lo..hi`")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

impl RunConfig {
    pub fn resolve_options(&self) -> ResolveOptions {
        match self.int_range {
            Some(r) => ResolveOptions { int_range: r },
            None => ResolveOptions::default(),
        }
    }

    /// Reads, parses and resolves the input files plus `extra`.
    pub fn load(&self, extra: &[PathBuf]) -> Result<Model, Failure> {
        let mut sources = Vec::new();
        for path in self.files.iter().chain(extra) {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Diagnostics(format!("{}: {e}", path.display())))?;
            sources.push((path.display().to_string(), text));
        }
        let spec = parse_sources(sources.iter().map(|(n, t)| (n.as_str(), t.as_str())))
            .map_err(|e| Failure::Diagnostics(e.to_string()))?;
        let model = resolve(&spec, &self.resolve_options()).map_err(|e| Failure::Diagnostics(e.to_string()))?;
        for w in &model.warnings {
            eprintln!("warning: {w}");
        }
        Ok(model)
    }
}
