use crate::model::{AutId, EventId, Expr, Kind, Model, Requirement, VarInit};

use super::EfaError;

/// One enabled edge per participating automaton; monitors without an enabled edge are absent.
pub type Choice = Vec<(AutId, usize)>;

/// Participation of the automata in one event at one state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enabled {
    /// Every non-monitoring plant automaton has an enabled edge.
    pub plant_ok: bool,
    /// Every non-monitoring requirement or supervisor automaton has an enabled edge.
    pub req_ok: bool,
    /// Enabled edges of plant automata, one list per automaton.
    pub plant: Vec<(AutId, Vec<usize>)>,
    /// Enabled edges of requirement and supervisor automata.
    pub req: Vec<(AutId, Vec<usize>)>,
}

impl Enabled {
    fn combos(groups: &[(AutId, Vec<usize>)]) -> Vec<Choice> {
        let mut out: Vec<Choice> = vec![Vec::new()];
        for (a, edges) in groups {
            if edges.is_empty() {
                continue;
            }
            out = out
                .iter()
                .flat_map(|c| {
                    edges.iter().map(move |&e| {
                        let mut c = c.clone();
                        c.push((*a, e));
                        c
                    })
                })
                .collect();
        }
        out
    }

    /// Joint choices when the event can occur, else empty.
    pub fn choices(&self) -> Vec<Choice> {
        if !(self.plant_ok && self.req_ok) {
            return Vec::new();
        }
        let mut all = self.plant.clone();
        all.extend(self.req.iter().cloned());
        Enabled::combos(&all)
    }

    /// Choices of the plant automata alone.
    pub fn plant_choices(&self) -> Vec<Choice> {
        if !self.plant_ok {
            return Vec::new();
        }
        Enabled::combos(&self.plant)
    }
}

/// Precomputed synchronization structure of a model.
pub struct Composition<'m> {
    pub model: &'m Model,
    /// Automata with the event in their alphabet, per event.
    participants: Vec<Vec<AutId>>,
    /// Edge indices per automaton, event and source location.
    edges: Vec<Vec<Vec<Vec<usize>>>>,
    needs: Vec<Expr>,
    invariants: Vec<Expr>,
    ignore_supervisors: bool,
}

impl<'m> Composition<'m> {
    pub fn new(model: &'m Model) -> Composition<'m> {
        let mut participants = vec![Vec::new(); model.events.len()];
        let mut edges = Vec::with_capacity(model.automata.len());
        for (a, aut) in model.automata.iter().enumerate() {
            let mut per = vec![vec![Vec::new(); aut.locations.len()]; model.events.len()];
            for (i, ed) in aut.edges.iter().enumerate() {
                per[ed.event][ed.source].push(i);
            }
            for &e in &aut.alphabet {
                participants[e].push(a);
            }
            edges.push(per);
        }
        let mut needs: Vec<Vec<Expr>> = vec![Vec::new(); model.events.len()];
        let mut invariants = Vec::new();
        for r in &model.requirements {
            match r {
                Requirement::Invariant(e) => invariants.push(e.clone()),
                Requirement::Needs { event, condition } => needs[*event].push(condition.clone()),
            }
        }
        Composition {
            model,
            participants,
            edges,
            needs: needs.into_iter().map(Expr::conjunction).collect(),
            invariants,
            ignore_supervisors: false,
        }
    }

    /// Leaves supervisor automata out of the composition.
    pub fn without_supervisors(mut self) -> Composition<'m> {
        self.ignore_supervisors = true;
        self
    }

    pub fn participants(&self, e: EventId) -> impl Iterator<Item = AutId> + '_ {
        self.participants[e]
            .iter()
            .copied()
            .filter(|&a| !(self.ignore_supervisors && self.model.automata[a].kind == Kind::Supervisor))
    }

    pub fn enabled(&self, s: &[i32], e: EventId) -> Result<Enabled, EfaError> {
        let model = self.model;
        let mut en = Enabled {
            plant_ok: true,
            req_ok: true,
            ..Default::default()
        };
        for a in self.participants(e) {
            let aut = &model.automata[a];
            let loc = s[a] as usize;
            let mut list = Vec::new();
            for &i in &self.edges[a][e][loc] {
                if model.holds(&aut.edges[i].guard, s)? {
                    list.push(i);
                }
            }
            let monitored = aut.monitors(e);
            if aut.kind == Kind::Plant {
                if list.is_empty() && !monitored {
                    en.plant_ok = false;
                    return Ok(en);
                }
                en.plant.push((a, list));
            } else {
                if list.is_empty() && !monitored {
                    en.req_ok = false;
                }
                en.req.push((a, list));
            }
        }
        Ok(en)
    }

    /// Applies a joint choice; updates read the pre-state.
    pub fn step(&self, s: &[i32], e: EventId, choice: &Choice) -> Result<Vec<i32>, EfaError> {
        let model = self.model;
        let mut t = s.to_vec();
        for &(a, i) in choice {
            let ed = &model.automata[a].edges[i];
            t[a] = ed.target as i32;
            for (v, value) in &ed.updates {
                let x = model.eval(value, s)?;
                let var = &model.vars[*v];
                if !var.ty.contains(model, x) {
                    return Err(EfaError::OutOfRange {
                        var: var.name.clone(),
                        value: x,
                        event: model.events[e].name.clone(),
                        automaton: model.automata[a].name.clone(),
                    });
                }
                t[model.var_slot(*v)] = x as i32;
            }
        }
        Ok(t)
    }

    pub fn legal(&self, s: &[i32]) -> Result<bool, EfaError> {
        for inv in &self.model.plant_invariants {
            if !self.model.holds(inv, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The conjunction of `needs` conditions of `e`.
    pub fn needs(&self, e: EventId) -> &Expr {
        &self.needs[e]
    }

    pub fn needs_hold(&self, s: &[i32], e: EventId) -> Result<bool, EfaError> {
        Ok(self.model.holds(&self.needs[e], s)?)
    }

    /// The state satisfies every state-invariant requirement.
    pub fn safe(&self, s: &[i32]) -> Result<bool, EfaError> {
        for inv in &self.invariants {
            if !self.model.holds(inv, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn marked(&self, s: &[i32]) -> bool {
        self.model
            .automata
            .iter()
            .enumerate()
            .filter(|(_, aut)| !(self.ignore_supervisors && aut.kind == Kind::Supervisor))
            .all(|(a, aut)| aut.locations[s[a] as usize].marked)
    }

    /// An uncontrollable event the plants can perform here but a requirement refuses.
    pub fn blocked_uncontrollable(&self, s: &[i32]) -> Result<Option<EventId>, EfaError> {
        for e in 0..self.model.events.len() {
            if self.model.events[e].controllable {
                continue;
            }
            let en = self.enabled(s, e)?;
            if !en.plant_ok || (en.req_ok && self.needs_hold(s, e)?) {
                continue;
            }
            for c in en.plant_choices() {
                let t = self.step(s, e, &c)?;
                if self.legal(&t)? {
                    return Ok(Some(e));
                }
            }
        }
        Ok(None)
    }

    /// Initial states: initial locations times any-initial values, filtered by
    /// initial predicates and plant invariants.
    pub fn initial_states(&self, budget: usize) -> Result<Vec<Vec<i32>>, EfaError> {
        let model = self.model;
        let mut partial: Vec<Vec<i32>> = vec![vec![0; model.state_len()]];
        let mut expand = |slot: usize, values: Vec<i32>| -> Result<(), EfaError> {
            if partial.len().saturating_mul(values.len()) > budget {
                return Err(EfaError::Budget { limit: budget });
            }
            partial = partial
                .iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q[slot] = v;
                        q
                    })
                })
                .collect();
            Ok(())
        };
        for (a, aut) in model.automata.iter().enumerate() {
            if self.ignore_supervisors && aut.kind == Kind::Supervisor {
                continue;
            }
            let locs = (0..aut.locations.len())
                .filter(|&l| aut.locations[l].initial.is_some())
                .map(|l| l as i32)
                .collect();
            expand(a, locs)?;
        }
        for (v, var) in model.vars.iter().enumerate() {
            let values = match var.init {
                VarInit::Value(x) => vec![x as i32],
                VarInit::Any => (var.ty.min()..=var.ty.max(model)).map(|x| x as i32).collect(),
            };
            expand(model.var_slot(v), values)?;
        }
        let mut out = Vec::new();
        for s in partial {
            let mut ok = self.legal(&s)?;
            for (a, aut) in model.automata.iter().enumerate() {
                if !ok {
                    break;
                }
                if self.ignore_supervisors && aut.kind == Kind::Supervisor {
                    continue;
                }
                if let Some(p) = &aut.locations[s[a] as usize].initial {
                    ok = model.holds(p, &s)?;
                }
            }
            if ok {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Checks that no requirement automaton has two enabled edges for one event at `s`.
    pub fn check_deterministic(&self, s: &[i32], e: EventId, en: &Enabled) -> Result<(), EfaError> {
        for (a, list) in &en.req {
            if list.len() > 1 && self.model.automata[*a].kind == Kind::Requirement {
                return Err(EfaError::Nondeterministic {
                    automaton: self.model.automata[*a].name.clone(),
                    event: self.model.events[e].name.clone(),
                    state: self.model.describe_state(s),
                });
            }
        }
        Ok(())
    }
}
