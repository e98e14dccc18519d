//! `plsynth`: check, count, explore, synthesize, verify and simulate product-line models.

mod config;
mod output;
mod simulate;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plsynth_core::efa::{explore, to_dot, Composition, EfaError, ExploreOptions, ExploreStats};
use plsynth_core::feature::{count_configurations, lower_decl, CountError};
use plsynth_core::lang::ast::Declaration;
use plsynth_core::lang::{parse_sources, print_spec, SourceSpec};
use plsynth_core::symbolic::{scientific, EncodeOptions, Limits, SymbolicError, SymbolicModel};
use plsynth_core::synthesis::{
    maximality_probe, synthesize, verify_controlled, Engine, SynthesisError, SynthesisOptions, SynthesisReport,
};
use plsynth_core::model::Kind;
use plsynth_core::{BigUint, Model};

use config::RunConfig;
use output::{say, Output};

#[derive(Parser)]
#[command(name = "plsynth", version, about = "Supervisory controller synthesis for product lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and resolve the model.
    Check {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Count valid feature configurations.
    Configs {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Explore the uncontrolled state space.
    Explore {
        #[command(flatten)]
        cfg: RunConfig,
        /// Write the state space as Graphviz.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Synthesize a supervisor.
    Synth {
        #[command(flatten)]
        cfg: RunConfig,
        /// Write the supervisor here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a supervisor for safety, nonblocking, controllability and maximal permissiveness.
    Verify {
        #[command(flatten)]
        cfg: RunConfig,
        /// Supervisor file; synthesized when omitted and none is among the inputs.
        #[arg(long)]
        supervisor: Option<PathBuf>,
        /// Maximum number of disabled transitions to probe.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Step through the model interactively or along a script.
    Simulate {
        #[command(flatten)]
        cfg: RunConfig,
        /// Supervisor file to compose with the model.
        #[arg(long)]
        supervisor: Option<PathBuf>,
        /// One event per line; `init N` picks an initial state.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Print the specification in canonical form, or the state space as Graphviz.
    Export {
        #[command(flatten)]
        cfg: RunConfig,
        /// Expand feature model blocks into automata.
        #[arg(long)]
        lowered: bool,
        /// Write the explored state space as Graphviz.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the specification here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command outcome other than success, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Diagnostics(String),
    Empty(String),
    Budget(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Diagnostics(_) | Failure::Failed(_) => 1,
            Failure::Empty(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Diagnostics(m) | Failure::Empty(m) | Failure::Budget(m) | Failure::Failed(m) => m,
        }
    }
}

impl From<EfaError> for Failure {
    fn from(e: EfaError) -> Failure {
        match e {
            EfaError::Budget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Diagnostics(e.to_string()),
        }
    }
}

impl From<SymbolicError> for Failure {
    fn from(e: SymbolicError) -> Failure {
        match e {
            SymbolicError::Budget { .. } | SymbolicError::DomainTooLarge { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Diagnostics(e.to_string()),
        }
    }
}

impl From<SynthesisError> for Failure {
    fn from(e: SynthesisError) -> Failure {
        match e {
            SynthesisError::Efa(e) => e.into(),
            SynthesisError::Symbolic(e) => e.into(),
            SynthesisError::Empty(_) => Failure::Empty(e.to_string()),
            _ => Failure::Diagnostics(e.to_string()),
        }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Failure {
        match e {
            CountError::Symbolic(e) => e.into(),
            _ => Failure::Diagnostics(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Check { cfg } => check(&cfg),
        Command::Configs { cfg } => configs(&cfg),
        Command::Explore { cfg, dot } => explore_cmd(&cfg, dot),
        Command::Synth { cfg, out } => synth(&cfg, out),
        Command::Verify { cfg, supervisor, samples } => verify(&cfg, supervisor, samples),
        Command::Simulate { cfg, supervisor, script } => simulate_cmd(&cfg, supervisor, script),
        Command::Export { cfg, lowered, dot, out } => export(&cfg, lowered, dot, out),
    }
}

fn check(cfg: &RunConfig) -> Result<(), Failure> {
    let model = cfg.load(&[])?;
    let mut out = Output::default();
    out.set("automata", model.automata.len());
    out.set("events", model.events.len());
    out.set("variables", model.vars.len());
    out.set("warnings", model.warnings.len());
    out.line(format!(
        "ok: {} automata, {} events, {} variables",
        model.automata.len(),
        model.events.len(),
        model.vars.len()
    ));
    out.print(cfg.structured);
    Ok(())
}

fn configs(cfg: &RunConfig) -> Result<(), Failure> {
    let model = cfg.load(&[])?;
    let count = count_configurations(&model)?;
    let mut out = Output::default();
    out.set("configurations", &count.total);
    out.set("features", count.features.len());
    out.set("dead", count.dead.join(","));
    out.line(format!("configurations: {}", count.total));
    out.line(format!("features: {}", count.features.len()));
    if !count.dead.is_empty() {
        out.line(format!("dead features: {}", count.dead.join(", ")));
    }
    out.print(cfg.structured);
    Ok(())
}

/// Whether `auto` should try the explicit engine first.
fn explicit_first(cfg: &RunConfig, model: &Model) -> bool {
    match cfg.engine {
        Engine::Explicit => true,
        Engine::Symbolic => false,
        Engine::Auto => model.worst_case_size() <= BigUint::from(cfg.budget) * 100u32,
    }
}

fn explore_cmd(cfg: &RunConfig, dot: Option<PathBuf>) -> Result<(), Failure> {
    let model = cfg.load(&[])?;
    let worst = model.worst_case_size();
    if dot.is_some() || explicit_first(cfg, &model) {
        let comp = Composition::new(&model);
        let opts = ExploreOptions {
            budget: cfg.budget,
            ..Default::default()
        };
        match explore(&comp, &opts) {
            Ok(ts) => {
                let stats = ExploreStats::of(&ts, &model);
                let mut out = Output::default();
                out.set("engine", "explicit");
                out.set("states", stats.states);
                out.set("transitions", stats.transitions);
                out.set("initial", stats.initial);
                out.set("marked", stats.marked);
                out.set("components", stats.components.len());
                let sizes: Vec<String> = stats.components.iter().map(|c| c.to_string()).collect();
                out.set("component_sizes", sizes.join(","));
                out.set("reconfigurations", stats.reconfigurations());
                out.set("worst_case", &worst);
                out.line(format!(
                    "states: {}, transitions: {}, initial: {}, marked: {}",
                    stats.states, stats.transitions, stats.initial, stats.marked
                ));
                out.line(format!("worst case: {} ({})", worst, scientific(&worst, 2)));
                if stats.components.len() <= 10 {
                    out.line(format!("components: {} (sizes {})", stats.components.len(), sizes.join(", ")));
                } else {
                    out.line(format!("components: {}", stats.components.len()));
                }
                out.line(format!("reconfiguration transitions: {}", stats.reconfigurations()));
                if let Some(path) = dot {
                    std::fs::write(&path, to_dot(&ts, &model))
                        .map_err(|e| Failure::Diagnostics(format!("{}: {e}", path.display())))?;
                    out.line(format!("wrote {}", path.display()));
                }
                out.print(cfg.structured);
                return Ok(());
            }
            Err(EfaError::Budget { .. }) if cfg.engine == Engine::Auto => {}
            Err(e) => return Err(e.into()),
        }
    }
    let mut sm = SymbolicModel::encode(&model, &EncodeOptions::default())?;
    let stats = sm.reach_stats(&Limits::default())?;
    let mut out = Output::default();
    out.set("engine", "symbolic");
    out.set("states", &stats.states);
    out.set("transitions", &stats.transitions);
    out.set("initial", &stats.initial);
    out.set("marked", &stats.marked);
    out.set("worst_case", &worst);
    out.line(format!(
        "states: {}, transitions: {}, initial: {}, marked: {}",
        stats.states, stats.transitions, stats.initial, stats.marked
    ));
    out.line(format!("states (approx.): {}, worst case: {}", scientific(&stats.states, 2), scientific(&worst, 2)));
    out.print(cfg.structured);
    Ok(())
}

fn synthesis_options(cfg: &RunConfig) -> SynthesisOptions {
    SynthesisOptions {
        engine: cfg.engine,
        budget: Some(cfg.budget),
        ..Default::default()
    }
}

fn report_output(r: &SynthesisReport) -> Output {
    let mut out = Output::default();
    out.set("engine", r.engine);
    if let Some(n) = r.uncontrolled_states {
        out.set("uncontrolled_states", n);
    }
    out.set("controlled_states", &r.controlled_states);
    out.set("controlled_transitions", &r.controlled_transitions);
    out.set("good_states", &r.good_states);
    out.set("iterations", r.iterations);
    out.set("empty", r.empty);
    out.set("peak_nodes", r.metrics.peak_nodes);
    out.set("operations", r.metrics.operations);
    out.set("cache_hits", r.metrics.cache_hits);
    out.set("image_iterations", r.metrics.iterations);
    out.set("gc_runs", r.metrics.gc_runs);
    out.set("seconds", format!("{:.3}", r.elapsed.as_secs_f64()));
    out.line(format!("engine: {}", r.engine));
    if let Some(n) = r.uncontrolled_states {
        out.line(format!("uncontrolled states: {n}"));
    }
    out.line(format!(
        "controlled states: {}, transitions: {}",
        r.controlled_states, r.controlled_transitions
    ));
    out.line(format!("fixpoint iterations: {}", r.iterations));
    out.line(format!(
        "decision diagrams: peak {} nodes, {} operations, {} cache hits, {} image steps, {} collections",
        r.metrics.peak_nodes, r.metrics.operations, r.metrics.cache_hits, r.metrics.iterations, r.metrics.gc_runs
    ));
    out.line(format!("time: {:.3} s", r.elapsed.as_secs_f64()));
    out
}

fn synth(cfg: &RunConfig, path: Option<PathBuf>) -> Result<(), Failure> {
    let model = cfg.load(&[])?;
    let mut syn = match synthesize(&model, &synthesis_options(cfg)) {
        Ok(s) => s,
        Err(SynthesisError::Empty(report)) => {
            report_output(&report).print(cfg.structured);
            return Err(Failure::Empty(
                "no initial state can be kept safe, nonblocking and controllable; check the requirements and plant invariants"
                    .into(),
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let sup = syn.supervisor();
    let mut out = report_output(&syn.report);
    out.set("guards", sup.guards.len());
    out.set("nontrivial_guards", sup.nontrivial());
    out.line(format!("guards: {} ({} not trivially true)", sup.guards.len(), sup.nontrivial()));
    for s in &sup.stats {
        out.set(
            &format!("guard_nodes.{}", model.events[s.event].name),
            format!("{}/{}", s.raw_nodes, s.simplified_nodes),
        );
    }
    let text = sup.to_fsc(&model);
    match path {
        Some(p) => {
            std::fs::write(&p, &text).map_err(|e| Failure::Diagnostics(format!("{}: {e}", p.display())))?;
            out.line(format!("wrote {}", p.display()));
            out.print(cfg.structured);
        }
        None => {
            out.print(cfg.structured);
            if !cfg.structured {
                say!();
                crate::output::emit(format_args!("{text}"));
            }
        }
    }
    Ok(())
}

/// The model composed with a supervisor file, or with a freshly synthesized supervisor.
fn supervised_model(cfg: &RunConfig, supervisor: Option<PathBuf>) -> Result<Model, Failure> {
    if let Some(p) = supervisor {
        return cfg.load(&[p]);
    }
    let model = cfg.load(&[])?;
    if model.automata.iter().any(|a| a.kind == Kind::Supervisor) {
        return Ok(model);
    }
    let mut syn = synthesize(&model, &synthesis_options(cfg))?;
    let text = syn.supervisor().to_fsc(&model);
    let dir = std::env::temp_dir().join(format!("plsynth-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| Failure::Diagnostics(e.to_string()))?;
    let path = dir.join("sup.fsc");
    std::fs::write(&path, text).map_err(|e| Failure::Diagnostics(e.to_string()))?;
    let result = cfg.load(&[path]);
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn verify(cfg: &RunConfig, supervisor: Option<PathBuf>, samples: usize) -> Result<(), Failure> {
    let model = supervised_model(cfg, supervisor)?;
    let report = verify_controlled(&model, cfg.budget)?;
    let probe = maximality_probe(&model, cfg.budget, samples, cfg.seed)?;
    let mut out = Output::default();
    out.set("states", report.states);
    out.set("transitions", report.transitions);
    out.set("safety", status(&report.safety));
    out.set("nonblocking", status(&report.nonblocking));
    out.set("controllability", status(&report.controllability));
    out.set("maximality", status(&probe.readdable));
    out.set("removed", probe.removed);
    out.set("probed", probe.checked);
    out.set("partial", probe.partial);
    out.line(format!("controlled states: {}, transitions: {}", report.states, report.transitions));
    if report.empty {
        out.line("the controlled system has no initial state");
    }
    for (name, list) in [
        ("safety", &report.safety),
        ("nonblocking", &report.nonblocking),
        ("controllability", &report.controllability),
    ] {
        out.line(format!("{name}: {}", status(list)));
        for c in list {
            out.line(format!("  {c}"));
        }
    }
    let sampled = if probe.partial { ", sampled" } else { "" };
    out.line(format!(
        "maximality: {} ({} disabled transitions, {} probed{sampled})",
        status(&probe.readdable),
        probe.removed,
        probe.checked
    ));
    for c in &probe.readdable {
        out.line(format!("  {c}"));
    }
    out.print(cfg.structured);
    if report.passed() && probe.passed() {
        Ok(())
    } else {
        Err(Failure::Failed("verification failed".into()))
    }
}

fn status<T>(failures: &[T]) -> &'static str {
    if failures.is_empty() {
        "ok"
    } else {
        "FAILED"
    }
}

fn simulate_cmd(cfg: &RunConfig, supervisor: Option<PathBuf>, script: Option<PathBuf>) -> Result<(), Failure> {
    let model = cfg.load(supervisor.as_slice())?;
    let mut sim = simulate::Simulator::new(&model, cfg.budget)?;
    if sim.initial_count() == 0 {
        return Err(Failure::Diagnostics("the model has no initial state".into()));
    }
    match script {
        Some(p) => {
            let file = std::fs::File::open(&p).map_err(|e| Failure::Diagnostics(format!("{}: {e}", p.display())))?;
            simulate::run(&mut sim, std::io::BufReader::new(file), false)?;
        }
        None => {
            let stdin = std::io::stdin();
            let interactive = stdin.is_terminal();
            simulate::run(&mut sim, stdin.lock(), interactive)?;
        }
    }
    Ok(())
}

fn export(cfg: &RunConfig, lowered: bool, dot: Option<PathBuf>, path: Option<PathBuf>) -> Result<(), Failure> {
    let text = if let Some(d) = dot {
        let model = cfg.load(&[])?;
        let opts = ExploreOptions {
            budget: cfg.budget,
            ..Default::default()
        };
        let ts = explore(&Composition::new(&model), &opts)?;
        std::fs::write(&d, to_dot(&ts, &model)).map_err(|e| Failure::Diagnostics(format!("{}: {e}", d.display())))?;
        eprintln!("wrote {} ({} states)", d.display(), ts.len());
        return Ok(());
    } else {
        let mut sources = Vec::new();
        for p in &cfg.files {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Diagnostics(format!("{}: {e}", p.display())))?;
            sources.push((p.display().to_string(), text));
        }
        let spec = parse_sources(sources.iter().map(|(n, t)| (n.as_str(), t.as_str())))
            .map_err(|e| Failure::Diagnostics(e.to_string()))?;
        let spec = if lowered { lower(spec)? } else { spec };
        print_spec(&spec)
    };
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| Failure::Diagnostics(format!("{}: {e}", p.display())))?,
        None => crate::output::emit(format_args!("{text}")),
    }
    Ok(())
}

fn lower(spec: SourceSpec) -> Result<SourceSpec, Failure> {
    let mut out = SourceSpec {
        files: spec.files.clone(),
        ..Default::default()
    };
    for (d, span) in spec.declarations.into_iter().zip(spec.spans) {
        match d {
            Declaration::FeatureModel(fm) => {
                for x in lower_decl(&fm).map_err(|e| Failure::Diagnostics(e.to_string()))? {
                    out.push(x, span);
                }
            }
            other => out.push(other, span),
        }
    }
    Ok(out)
}
