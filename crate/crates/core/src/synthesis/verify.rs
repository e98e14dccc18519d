use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SynthesisError;
use crate::efa::{explore, Composition, EfaError, ExploreOptions, TransitionSystem};
use crate::model::{EventId, Expr, Kind, Model};

/// A failed check, with the events leading to the offending state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub property: &'static str,
    pub trace: Vec<String>,
    pub state: String,
    pub detail: String,
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}; trace: ", self.property, self.detail)?;
        if self.trace.is_empty() {
            f.write_str("(initial)")?;
        } else {
            f.write_str(&self.trace.join(" "))?;
        }
        write!(f, "; state: {}", self.state)
    }
}

/// Outcome of the independent safety, nonblocking and controllability checks.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub states: usize,
    pub transitions: usize,
    pub safety: Vec<Counterexample>,
    pub nonblocking: Vec<Counterexample>,
    pub controllability: Vec<Counterexample>,
    /// The controlled system has no initial state.
    pub empty: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.empty && self.safety.is_empty() && self.nonblocking.is_empty() && self.controllability.is_empty()
    }
}

const MAX_EXAMPLES: usize = 5;

fn witness(ts: &TransitionSystem, model: &Model, s: u32, property: &'static str, detail: String) -> Counterexample {
    Counterexample {
        property,
        trace: ts.trace_to(s).into_iter().map(|e| model.events[e].name.clone()).collect(),
        state: model.describe_state(&ts.states[s as usize]),
        detail,
    }
}

/// Checks a model that already contains its supervisor by exploring the controlled system.
pub fn verify_controlled(model: &Model, budget: usize) -> Result<VerifyReport, SynthesisError> {
    let comp = Composition::new(model);
    let opts = ExploreOptions {
        budget,
        only_allowed: true,
        check_determinism: true,
    };
    let ts = explore(&comp, &opts)?;
    let mut report = VerifyReport {
        states: ts.len(),
        transitions: ts.transitions.len(),
        empty: ts.is_empty(),
        ..Default::default()
    };
    for i in 0..ts.len() {
        let s = i as u32;
        if ts.unsafe_states[i] && report.safety.len() < MAX_EXAMPLES {
            report.safety.push(witness(&ts, model, s, "safety", "a requirement invariant is violated".into()));
        }
        if let Some(e) = ts.blocked[i] {
            if report.controllability.len() < MAX_EXAMPLES {
                let detail = format!("uncontrollable `{}` is possible in the plant but disabled", model.events[e].name);
                report.controllability.push(witness(&ts, model, s, "controllability", detail));
            }
        }
    }
    let coreach = backward(&ts, &ts.marked, |_| true);
    for i in 0..ts.len() {
        if !coreach[i] {
            if report.nonblocking.len() < MAX_EXAMPLES {
                report.nonblocking.push(witness(
                    &ts,
                    model,
                    i as u32,
                    "nonblocking",
                    "no marked state is reachable".into(),
                ));
            } else {
                break;
            }
        }
    }
    Ok(report)
}

/// States that reach `target` along transitions accepted by `follow`.
fn backward(ts: &TransitionSystem, target: &[bool], follow: impl Fn(usize) -> bool) -> Vec<bool> {
    let preds = ts.predecessors();
    let mut seen = target.to_vec();
    let mut stack: Vec<usize> = (0..ts.len()).filter(|&i| seen[i]).collect();
    while let Some(j) = stack.pop() {
        for &k in &preds[j] {
            let s = ts.transitions[k].source as usize;
            if !seen[s] && follow(k) {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    seen
}

#[derive(Clone, Debug, Default)]
pub struct ProbeReport {
    /// Controllable transitions from controlled states that the supervisor disables.
    pub removed: usize,
    pub checked: usize,
    /// Removed transitions that could be re-added without breaking any property.
    pub readdable: Vec<Counterexample>,
    /// Only a sample of the removed transitions was checked.
    pub partial: bool,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.readdable.is_empty()
    }
}

/// Tries to re-add each transition disabled by the supervisor automata of `model`.
///
/// The supervisors must have a single location. At most `sample_budget` removed
/// transitions are checked; a larger set is sampled with `seed`.
pub fn maximality_probe(
    model: &Model,
    budget: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<ProbeReport, SynthesisError> {
    let sups: Vec<usize> = (0..model.automata.len())
        .filter(|&a| model.automata[a].kind == Kind::Supervisor)
        .collect();
    let mut guards: Vec<Vec<Expr>> = vec![Vec::new(); model.events.len()];
    let mut initial = Vec::new();
    for &a in &sups {
        let aut = &model.automata[a];
        if aut.locations.len() != 1 {
            return Err(SynthesisError::Unsupported(format!(
                "supervisor `{}` has more than one location",
                aut.name
            )));
        }
        if let Some(p) = &aut.locations[0].initial {
            initial.push(p.clone());
        }
        for &e in &aut.alphabet {
            if !aut.monitors(e) {
                let g = Expr::disjunction(aut.edges.iter().filter(|ed| ed.event == e).map(|ed| ed.guard.clone()));
                guards[e].push(g);
            }
        }
    }
    let guards: Vec<Expr> = guards.into_iter().map(Expr::conjunction).collect();
    let initial = Expr::conjunction(initial);

    let comp = Composition::new(model).without_supervisors();
    let opts = ExploreOptions {
        budget,
        only_allowed: false,
        check_determinism: false,
    };
    let ts = explore(&comp, &opts)?;
    let mut sup_ok = Vec::with_capacity(ts.transitions.len());
    for t in &ts.transitions {
        let s = &ts.states[t.source as usize];
        sup_ok.push(t.allowed && model.holds(&guards[t.event], s).map_err(EfaError::from)?);
    }
    let n = ts.len();
    let bad: Vec<bool> = (0..n).map(|i| ts.unsafe_states[i] || ts.blocked[i].is_some()).collect();
    let coreach = backward(&ts, &ts.marked, |k| sup_ok[k]);
    let seeds: Vec<bool> = (0..n).map(|i| bad[i] || !coreach[i]).collect();
    let fail = backward(&ts, &seeds, |k| sup_ok[k]);

    let succ = ts.successors();
    let mut reach = vec![false; n];
    let mut stack = Vec::new();
    for &i in &ts.initial {
        if model.holds(&initial, &ts.states[i as usize]).map_err(EfaError::from)? {
            reach[i as usize] = true;
            stack.push(i as usize);
        }
    }
    while let Some(j) = stack.pop() {
        for &k in &succ[j] {
            let d = ts.transitions[k].target as usize;
            if sup_ok[k] && !reach[d] {
                reach[d] = true;
                stack.push(d);
            }
        }
    }

    let removed: Vec<usize> = (0..ts.transitions.len())
        .filter(|&k| {
            let t = ts.transitions[k];
            reach[t.source as usize] && t.allowed && !sup_ok[k] && model.events[t.event].controllable
        })
        .collect();
    let mut report = ProbeReport {
        removed: removed.len(),
        ..Default::default()
    };
    let chosen: Vec<usize> = if removed.len() > sample_budget {
        report.partial = true;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, removed.len(), sample_budget).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| removed[i]).collect()
    } else {
        removed
    };
    report.checked = chosen.len();
    for k in chosen {
        let t = ts.transitions[k];
        if !fail[t.target as usize] && report.readdable.len() < MAX_EXAMPLES {
            report.readdable.push(readdable(&ts, model, t.source, t.event, t.target));
        }
    }
    Ok(report)
}

fn readdable(ts: &TransitionSystem, model: &Model, s: u32, e: EventId, t: u32) -> Counterexample {
    witness(
        ts,
        model,
        s,
        "maximality",
        format!(
            "`{}` could be allowed; it leads to {}",
            model.events[e].name,
            model.describe_state(&ts.states[t as usize])
        ),
    )
}
