use crate::model::{AutId, EventId, Expr, Kind, Model, Requirement};
use crate::symbolic::{SymbolicModel, FALSE};

use super::SynthesisError;

/// How a requirement enters the control problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RequirementClass {
    /// A state invariant: violating states are bad.
    Invariant,
    /// `e needs P` for a controllable `e`: `P` is conjoined to the guard of `e`.
    GuardConjunct { event: EventId },
    /// `e needs P` for an uncontrollable `e`: states where the plant enables `e` and `P` fails are bad.
    BadStateCondition { event: EventId },
}

/// A model split into the ingredients of synthesis.
#[derive(Clone, Debug)]
pub struct ControlProblem<'m> {
    pub model: &'m Model,
    pub plants: Vec<AutId>,
    pub requirement_automata: Vec<AutId>,
    /// Every global requirement with its classification.
    pub requirements: Vec<(RequirementClass, Expr)>,
    pub controllable: Vec<bool>,
}

impl ControlProblem<'_> {
    pub fn count(&self, pred: impl Fn(&RequirementClass) -> bool) -> usize {
        self.requirements.iter().filter(|(c, _)| pred(c)).count()
    }
}

/// Classifies the requirements and checks that requirement automata are deterministic.
pub fn normalize<'m>(model: &'m Model, sm: &mut SymbolicModel<'m>) -> Result<ControlProblem<'m>, SynthesisError> {
    let mut plants = Vec::new();
    let mut requirement_automata = Vec::new();
    for (a, aut) in model.automata.iter().enumerate() {
        match aut.kind {
            Kind::Plant => plants.push(a),
            Kind::Requirement => requirement_automata.push(a),
            Kind::Supervisor => {}
        }
    }
    for &a in &requirement_automata {
        check_deterministic(model, sm, a)?;
    }
    let requirements = model
        .requirements
        .iter()
        .map(|r| match r {
            Requirement::Invariant(e) => (RequirementClass::Invariant, e.clone()),
            Requirement::Needs { event, condition } => {
                let class = if model.events[*event].controllable {
                    RequirementClass::GuardConjunct { event: *event }
                } else {
                    RequirementClass::BadStateCondition { event: *event }
                };
                (class, condition.clone())
            }
        })
        .collect();
    Ok(ControlProblem {
        model,
        plants,
        requirement_automata,
        requirements,
        controllable: model.events.iter().map(|e| e.controllable).collect(),
    })
}

fn check_deterministic(model: &Model, sm: &mut SymbolicModel<'_>, a: AutId) -> Result<(), SynthesisError> {
    let aut = &model.automata[a];
    for (i, x) in aut.edges.iter().enumerate() {
        for y in &aut.edges[i + 1..] {
            if x.source != y.source || x.event != y.event {
                continue;
            }
            if x.target == y.target && x.updates == y.updates {
                continue;
            }
            let gx = sm.bool_expr(&x.guard)?;
            let gy = sm.bool_expr(&y.guard)?;
            let both = sm.store.and(gx, gy);
            if sm.store.and(both, sm.legal) != FALSE {
                return Err(SynthesisError::Nondeterministic {
                    automaton: aut.name.clone(),
                    location: model.location_name(a, x.source),
                    event: model.events[x.event].name.clone(),
                });
            }
        }
    }
    Ok(())
}
