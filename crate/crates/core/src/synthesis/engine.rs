use std::time::{Duration, Instant};

use num_bigint::BigUint;

use super::normalize::{normalize, ControlProblem};
use super::supervisor::Supervisor;
use super::SynthesisError;
use crate::efa::{explore, Composition, ExploreOptions, TransitionSystem};
use crate::model::Model;
use crate::symbolic::{Bdd, EffortMetrics, EncodeOptions, Limits, Relation, SymbolicModel, FALSE};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    Explicit,
    Symbolic,
    /// Explicit when the worst-case state count is within a hundred budgets, falling back to symbolic.
    #[default]
    Auto,
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Engine, String> {
        match s {
            "explicit" => Ok(Engine::Explicit),
            "symbolic" => Ok(Engine::Symbolic),
            "auto" => Ok(Engine::Auto),
            _ => Err(format!("unknown engine `{s}` (expected explicit, symbolic or auto)")),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Explicit => "explicit",
            Engine::Symbolic => "symbolic",
            Engine::Auto => "auto",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct SynthesisOptions {
    pub engine: Engine,
    /// Explicit state budget.
    pub budget: Option<usize>,
    pub encode: EncodeOptions,
    pub limits: Limits,
}

impl SynthesisOptions {
    fn budget(&self) -> usize {
        self.budget.unwrap_or(ExploreOptions::default().budget)
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisReport {
    /// The engine that produced the result.
    pub engine: Engine,
    /// Reachable uncontrolled states, when explored explicitly.
    pub uncontrolled_states: Option<usize>,
    /// States in the good-state predicate; explicit runs count only reachable ones.
    pub good_states: BigUint,
    pub controlled_states: BigUint,
    pub controlled_transitions: BigUint,
    pub iterations: usize,
    /// No initial state survives.
    pub empty: bool,
    pub metrics: EffortMetrics,
    pub elapsed: Duration,
}

/// A synthesized supervisor in symbolic form.
pub struct Synthesis<'m> {
    pub problem: ControlProblem<'m>,
    pub sm: SymbolicModel<'m>,
    pub report: SynthesisReport,
    good: usize,
    controlled: usize,
}

impl<'m> Synthesis<'m> {
    pub fn good(&self) -> Bdd {
        self.sm.pinned[self.good]
    }

    pub fn controlled(&self) -> Bdd {
        self.sm.pinned[self.controlled]
    }

    /// Guards for the controllable events, simplified against the controlled behaviour.
    pub fn supervisor(&mut self) -> Supervisor {
        Supervisor::build(self)
    }
}

/// Computes the maximally permissive safe, nonblocking and controllable supervisor.
pub fn synthesize<'m>(model: &'m Model, opts: &SynthesisOptions) -> Result<Synthesis<'m>, SynthesisError> {
    let start = Instant::now();
    let mut sm = SymbolicModel::encode(model, &opts.encode)?;
    let problem = normalize(model, &mut sm)?;
    let budget = opts.budget();
    let engine = match opts.engine {
        Engine::Auto if model.worst_case_size() <= BigUint::from(budget) * 100u32 => Engine::Auto,
        Engine::Auto => Engine::Symbolic,
        e => e,
    };
    let mut result = None;
    if engine != Engine::Symbolic {
        match explicit(model, &mut sm, budget) {
            Ok(r) => result = Some(r),
            Err(e) if engine == Engine::Auto && e.is_budget() => {}
            Err(e) => return Err(e),
        }
    }
    let (engine, uncontrolled, good, controlled, iterations) = match result {
        Some((n, good, controlled, it)) => (Engine::Explicit, Some(n), good, controlled, it),
        None => {
            let sup = sm.synthesize(&opts.limits)?;
            (Engine::Symbolic, None, sup.good, sup.controlled, sup.iterations)
        }
    };
    let controlled_transitions = sm.transitions_between(controlled, Relation::Allowed, good);
    let report = SynthesisReport {
        engine,
        uncontrolled_states: uncontrolled,
        good_states: sm.count(good),
        controlled_states: sm.count(controlled),
        controlled_transitions,
        iterations,
        empty: controlled == FALSE,
        metrics: sm.store.metrics(),
        elapsed: start.elapsed(),
    };
    if report.empty {
        return Err(SynthesisError::Empty(Box::new(report)));
    }
    sm.pinned.push(good);
    sm.pinned.push(controlled);
    let n = sm.pinned.len();
    Ok(Synthesis {
        problem,
        sm,
        report,
        good: n - 2,
        controlled: n - 1,
    })
}

type Explicit = (usize, Bdd, Bdd, usize);

fn explicit(model: &Model, sm: &mut SymbolicModel<'_>, budget: usize) -> Result<Explicit, SynthesisError> {
    let comp = Composition::new(model);
    let opts = ExploreOptions {
        budget,
        only_allowed: false,
        check_determinism: false,
    };
    let ts = explore(&comp, &opts)?;
    let (good, iterations) = explicit_fixpoint(&ts, model);
    let controlled = supervised(&ts, &good);
    let g = states_bdd(sm, &ts, &good);
    sm.pinned.push(g);
    let c = states_bdd(sm, &ts, &controlled);
    let g = sm.pinned.pop().unwrap_or(FALSE);
    Ok((ts.len(), g, c, iterations))
}

/// Greatest controllable, nonblocking subset of the explored states.
pub(crate) fn explicit_fixpoint(ts: &TransitionSystem, model: &Model) -> (Vec<bool>, usize) {
    let n = ts.len();
    let preds = ts.predecessors();
    let mut good: Vec<bool> = (0..n).map(|i| !ts.unsafe_states[i] && ts.blocked[i].is_none()).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut coreach = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&i| good[i] && ts.marked[i]).collect();
        for &i in &stack {
            coreach[i] = true;
        }
        while let Some(j) = stack.pop() {
            for &k in &preds[j] {
                let t = ts.transitions[k];
                let s = t.source as usize;
                if t.allowed && good[s] && !coreach[s] {
                    coreach[s] = true;
                    stack.push(s);
                }
            }
        }
        let mut lost: Vec<bool> = coreach.iter().map(|c| !c).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&i| lost[i]).collect();
        while let Some(j) = stack.pop() {
            for &k in &preds[j] {
                let t = ts.transitions[k];
                let s = t.source as usize;
                if !model.events[t.event].controllable && !lost[s] {
                    lost[s] = true;
                    stack.push(s);
                }
            }
        }
        let next: Vec<bool> = (0..n).map(|i| good[i] && !lost[i]).collect();
        if next == good {
            return (good, iterations);
        }
        good = next;
    }
}

/// States reachable from good initial states along allowed transitions inside `good`.
pub(crate) fn supervised(ts: &TransitionSystem, good: &[bool]) -> Vec<bool> {
    let succ = ts.successors();
    let mut seen = vec![false; ts.len()];
    let mut stack = Vec::new();
    for &i in &ts.initial {
        if good[i as usize] && !seen[i as usize] {
            seen[i as usize] = true;
            stack.push(i as usize);
        }
    }
    while let Some(j) = stack.pop() {
        for &k in &succ[j] {
            let t = ts.transitions[k];
            let d = t.target as usize;
            if t.allowed && good[d] && !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen
}

fn states_bdd(sm: &mut SymbolicModel<'_>, ts: &TransitionSystem, member: &[bool]) -> Bdd {
    let mut parts: Vec<Bdd> = ts
        .states
        .iter()
        .zip(member)
        .filter(|(_, &m)| m)
        .map(|(s, _)| sm.state_bdd(s))
        .collect();
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| if c.len() == 2 { sm.store.or(c[0], c[1]) } else { c[0] })
            .collect();
    }
    parts.pop().unwrap_or(FALSE)
}
