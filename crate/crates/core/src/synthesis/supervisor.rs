use super::engine::Synthesis;
use crate::lang::ast::{AutomatonBody, AutomatonKind, Declaration, EdgeDecl, LocationDecl, Path};
use crate::lang::printer::print_declaration;
use crate::model::{EventId, Expr, Model};
use crate::symbolic::TRUE;

/// Size of one guard before and after simplification against the controlled behaviour.
///
/// Simplification may assume the plant and requirement automata allow the event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardStat {
    pub event: EventId,
    pub raw_nodes: usize,
    pub simplified_nodes: usize,
}

/// A single-location supervisor automaton with one guarded self-loop per controllable event.
#[derive(Clone, Debug, PartialEq)]
pub struct Supervisor {
    pub name: String,
    /// Controllable events in declaration order.
    pub alphabet: Vec<EventId>,
    /// Restriction of the initial states, `true` when none is needed.
    pub initial: Expr,
    /// Guards sorted by event name.
    pub guards: Vec<(EventId, Expr)>,
    pub stats: Vec<GuardStat>,
}

impl Supervisor {
    pub(super) fn build(syn: &mut Synthesis<'_>) -> Supervisor {
        let good = syn.good();
        let controlled = syn.controlled();
        let sm = &mut syn.sm;
        let raw = sm.supervisor_guards(good);
        let mut guards = Vec::new();
        let mut stats = Vec::new();
        for (event, g) in raw {
            let ev = sm.events.iter().position(|r| r.event == event).unwrap_or_default();
            let plant = sm.plant_enabled(ev);
            let req = sm.req_enabled(ev);
            let care = sm.store.and(controlled, plant);
            let care = sm.store.and(care, req);
            let simplified = if care == crate::symbolic::FALSE { TRUE } else { sm.store.restrict(g, care) };
            stats.push(GuardStat {
                event,
                raw_nodes: sm.store.size(g),
                simplified_nodes: sm.store.size(simplified),
            });
            guards.push((event, sm.to_expr(simplified)));
        }
        let model = sm.model;
        guards.sort_by(|a, b| model.events[a.0].name.cmp(&model.events[b.0].name));
        let init_good = sm.store.and(sm.initial, good);
        let initial = if init_good == sm.initial {
            Expr::Bool(true)
        } else {
            let r = sm.store.restrict(init_good, sm.initial);
            sm.to_expr(r)
        };
        let mut alphabet: Vec<EventId> = guards.iter().map(|g| g.0).collect();
        alphabet.sort_unstable();
        Supervisor {
            name: "sup".into(),
            alphabet,
            initial,
            guards,
            stats,
        }
    }

    pub fn guard(&self, e: EventId) -> Option<&Expr> {
        self.guards.iter().find(|g| g.0 == e).map(|g| &g.1)
    }

    /// The supervisor as a declaration to be composed with the model.
    pub fn to_declaration(&self, model: &Model) -> Declaration {
        let path = |e: EventId| Path(model.events[e].name.split('.').map(String::from).collect());
        let edges = self
            .guards
            .iter()
            .map(|(e, g)| EdgeDecl {
                events: vec![path(*e)],
                guard: (*g != Expr::Bool(true)).then(|| model.to_ast(g)),
                updates: Vec::new(),
                target: None,
                span: Default::default(),
            })
            .collect();
        let initial = match &self.initial {
            Expr::Bool(true) => None,
            p => Some(model.to_ast(p)),
        };
        Declaration::Automaton {
            kind: AutomatonKind::Supervisor,
            name: self.name.clone(),
            body: AutomatonBody {
                alphabet: Some(self.alphabet.iter().map(|&e| path(e)).collect()),
                locations: vec![LocationDecl {
                    name: None,
                    initial: Some(initial),
                    marked: true,
                    edges,
                    span: Default::default(),
                }],
                ..Default::default()
            },
        }
    }

    /// Textual form, ready to be concatenated with the model files.
    pub fn to_fsc(&self, model: &Model) -> String {
        print_declaration(&self.to_declaration(model))
    }

    /// Number of guards that are not constant `true`.
    pub fn nontrivial(&self) -> usize {
        self.guards.iter().filter(|g| g.1 != Expr::Bool(true)).count()
    }
}

