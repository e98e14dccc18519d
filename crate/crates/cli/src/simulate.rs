use std::io::BufRead;

use plsynth_core::efa::{Composition, EfaError};
use plsynth_core::model::{EventId, Expr, Kind, Model};

use crate::output::say;

/// Reason an event cannot be taken.
#[derive(Debug, PartialEq, Eq)]
pub enum Refusal {
    Unknown(String),
    Supervisor(String),
    Disabled(String),
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Refusal::Unknown(e) => write!(f, "unknown event `{e}`"),
            Refusal::Supervisor(g) => write!(f, "disabled by supervisor guard: {g}"),
            Refusal::Disabled(e) => write!(f, "`{e}` is not enabled here"),
        }
    }
}

pub struct Simulator<'m> {
    model: &'m Model,
    comp: Composition<'m>,
    plain: Composition<'m>,
    initial: Vec<Vec<i32>>,
    pub state: Vec<i32>,
}

pub fn is_reconfiguration(name: &str) -> bool {
    name.ends_with(".come") || name.ends_with(".go") || name.contains("swap")
}

impl<'m> Simulator<'m> {
    pub fn new(model: &'m Model, budget: usize) -> Result<Simulator<'m>, EfaError> {
        let comp = Composition::new(model);
        let initial = comp.initial_states(budget)?;
        let state = initial.first().cloned().unwrap_or_default();
        Ok(Simulator {
            model,
            comp,
            plain: Composition::new(model).without_supervisors(),
            initial,
            state,
        })
    }

    pub fn initial_count(&self) -> usize {
        self.initial.len()
    }

    pub fn select_initial(&mut self, i: usize) -> Result<(), String> {
        match self.initial.get(i) {
            Some(s) => {
                self.state = s.clone();
                Ok(())
            }
            None => Err(format!("there are {} initial states", self.initial.len())),
        }
    }

    fn successor(&self, comp: &Composition<'_>, e: EventId) -> Result<Option<Vec<i32>>, EfaError> {
        let en = comp.enabled(&self.state, e)?;
        for c in en.choices() {
            let t = comp.step(&self.state, e, &c)?;
            if comp.legal(&t)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// Events with their status at the current state; `None` means enabled.
    pub fn events(&self) -> Result<Vec<(EventId, Option<Refusal>)>, EfaError> {
        let mut out = Vec::new();
        for e in 0..self.model.events.len() {
            if self.successor(&self.comp, e)?.is_some() {
                out.push((e, None));
            } else if self.successor(&self.plain, e)?.is_some() {
                out.push((e, Some(Refusal::Supervisor(self.supervisor_guard(e)))));
            }
        }
        Ok(out)
    }

    fn supervisor_guard(&self, e: EventId) -> String {
        let mut parts = Vec::new();
        for aut in &self.model.automata {
            if aut.kind == Kind::Supervisor && aut.has_event(e) {
                let g = Expr::disjunction(aut.edges.iter().filter(|ed| ed.event == e).map(|ed| ed.guard.clone()));
                parts.push(g);
            }
        }
        self.model.display(&Expr::conjunction(parts)).to_string()
    }

    pub fn fire(&mut self, name: &str) -> Result<Result<(), Refusal>, EfaError> {
        let Some(e) = self.model.event(name) else {
            return Ok(Err(Refusal::Unknown(name.to_string())));
        };
        if let Some(t) = self.successor(&self.comp, e)? {
            self.state = t;
            return Ok(Ok(()));
        }
        if self.successor(&self.plain, e)?.is_some() {
            return Ok(Err(Refusal::Supervisor(self.supervisor_guard(e))));
        }
        Ok(Err(Refusal::Disabled(name.to_string())))
    }

    pub fn describe(&self) -> String {
        let marked = if self.comp.marked(&self.state) { " (marked)" } else { "" };
        format!("state: {}{marked}", self.model.describe_state(&self.state))
    }
}

/// Runs a session over `input`; returns the number of refused steps.
pub fn run(sim: &mut Simulator<'_>, input: impl BufRead, interactive: bool) -> Result<usize, EfaError> {
    say!("initial states: {}", sim.initial_count());
    say!("{}", sim.describe());
    if interactive {
        list(sim)?;
    }
    let mut refused = 0;
    for line in input.lines() {
        let Ok(line) = line else { break };
        let cmd = line.split("//").next().unwrap_or("").trim();
        if cmd.is_empty() {
            continue;
        }
        match cmd {
            "quit" | "exit" => break,
            "list" | "?" => {
                list(sim)?;
                continue;
            }
            _ => {}
        }
        if let Some(i) = cmd.strip_prefix("init ") {
            match i.trim().parse::<usize>().map_err(|e| e.to_string()).and_then(|i| sim.select_initial(i)) {
                Ok(()) => say!("{}", sim.describe()),
                Err(e) => {
                    refused += 1;
                    say!("error: {e}");
                }
            }
            continue;
        }
        match sim.fire(cmd)? {
            Ok(()) => say!("> {cmd}\n{}", sim.describe()),
            Err(r) => {
                refused += 1;
                say!("> {cmd}\nrefused: {r}");
            }
        }
        if interactive {
            list(sim)?;
        }
    }
    Ok(refused)
}

fn list(sim: &Simulator<'_>) -> Result<(), EfaError> {
    for (e, status) in sim.events()? {
        let ev = &sim.model.events[e];
        let kind = if ev.controllable { "c" } else { "u" };
        let reconf = if is_reconfiguration(&ev.name) { " (reconfiguration)" } else { "" };
        match status {
            None => say!("  [{kind}] {}{reconf}", ev.name),
            Some(r) => say!("  [{kind}] {}{reconf}: {r}", ev.name),
        }
    }
    Ok(())
}
