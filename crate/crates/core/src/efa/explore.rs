use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use super::compose::Composition;
use super::EfaError;
use crate::model::EventId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: u32,
    pub event: EventId,
    pub target: u32,
    /// The event's `needs` conditions hold at the source.
    pub allowed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    pub budget: usize,
    /// Follow only transitions whose `needs` conditions hold.
    pub only_allowed: bool,
    /// Reject requirement automata with two enabled edges for one event.
    pub check_determinism: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            budget: 5_000_000,
            only_allowed: false,
            check_determinism: true,
        }
    }
}

/// An explicitly enumerated state space.
#[derive(Clone, Debug, Default)]
pub struct TransitionSystem {
    pub states: Vec<Box<[i32]>>,
    index: FxHashMap<Box<[i32]>, u32>,
    pub transitions: Vec<Transition>,
    pub initial: Vec<u32>,
    pub marked: Vec<bool>,
    /// A state-invariant requirement is violated.
    pub unsafe_states: Vec<bool>,
    /// An uncontrollable event possible in the plants is refused, if any.
    pub blocked: Vec<Option<EventId>>,
    /// BFS predecessor `(state, event)` for trace reconstruction.
    parent: Vec<Option<(u32, EventId)>>,
}

impl TransitionSystem {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn id(&self, s: &[i32]) -> Option<u32> {
        self.index.get(s).copied()
    }

    fn intern(&mut self, s: Vec<i32>, parent: Option<(u32, EventId)>) -> (u32, bool) {
        if let Some(&i) = self.index.get(s.as_slice()) {
            return (i, false);
        }
        let i = self.states.len() as u32;
        let b: Box<[i32]> = s.into_boxed_slice();
        self.index.insert(b.clone(), i);
        self.states.push(b);
        self.parent.push(parent);
        (i, true)
    }

    /// Events leading from an initial state to `s` along the BFS tree.
    pub fn trace_to(&self, s: u32) -> Vec<EventId> {
        let mut events = Vec::new();
        let mut cur = s;
        while let Some((p, e)) = self.parent[cur as usize] {
            events.push(e);
            cur = p;
        }
        events.reverse();
        events
    }

    /// Outgoing transition index ranges, by source state.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.source as usize].push(i);
        }
        out
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.target as usize].push(i);
        }
        out
    }

    /// Sizes of the weakly connected components, ascending.
    pub fn components(&self) -> Vec<usize> {
        let n = self.states.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for t in &self.transitions {
            let (a, b) = (find(&mut parent, t.source as usize), find(&mut parent, t.target as usize));
            if a != b {
                parent[a] = b;
            }
        }
        let mut sizes: FxHashMap<usize, usize> = FxHashMap::default();
        for x in 0..n {
            *sizes.entry(find(&mut parent, x)).or_default() += 1;
        }
        let mut v: Vec<usize> = sizes.into_values().collect();
        v.sort_unstable();
        v
    }
}

/// Breadth-first exploration from the initial states.
pub fn explore(comp: &Composition<'_>, opts: &ExploreOptions) -> Result<TransitionSystem, EfaError> {
    let init = comp.initial_states(opts.budget)?;
    explore_from(comp, init, opts)
}

/// Breadth-first exploration from the given start states, which become the initial set.
pub fn explore_from(
    comp: &Composition<'_>,
    starts: Vec<Vec<i32>>,
    opts: &ExploreOptions,
) -> Result<TransitionSystem, EfaError> {
    let model = comp.model;
    let mut ts = TransitionSystem::default();
    let mut queue = VecDeque::new();
    for s in starts {
        let (i, fresh) = ts.intern(s, None);
        if fresh {
            ts.initial.push(i);
            queue.push_back(i);
        }
    }
    if ts.len() > opts.budget {
        return Err(EfaError::Budget { limit: opts.budget });
    }
    let mut local: Vec<(EventId, u32)> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let s = ts.states[i as usize].to_vec();
        debug_assert_eq!(ts.marked.len(), i as usize);
        ts.marked.push(comp.marked(&s));
        ts.unsafe_states.push(!comp.safe(&s)?);
        let mut blocked = None;
        local.clear();
        for e in 0..model.events.len() {
            let en = comp.enabled(&s, e)?;
            if !en.plant_ok {
                continue;
            }
            if opts.check_determinism {
                comp.check_deterministic(&s, e, &en)?;
            }
            let needs = comp.needs_hold(&s, e)?;
            if !model.events[e].controllable && blocked.is_none() && !(en.req_ok && needs) {
                for c in en.plant_choices() {
                    if comp.legal(&comp.step(&s, e, &c)?)? {
                        blocked = Some(e);
                        break;
                    }
                }
            }
            if opts.only_allowed && !needs {
                continue;
            }
            for c in en.choices() {
                let t = comp.step(&s, e, &c)?;
                if !comp.legal(&t)? {
                    continue;
                }
                let (j, fresh) = ts.intern(t, Some((i, e)));
                if fresh {
                    if ts.len() > opts.budget {
                        return Err(EfaError::Budget { limit: opts.budget });
                    }
                    queue.push_back(j);
                }
                if !local.contains(&(e, j)) {
                    local.push((e, j));
                    ts.transitions.push(Transition {
                        source: i,
                        event: e,
                        target: j,
                        allowed: needs,
                    });
                }
            }
        }
        ts.blocked.push(blocked);
    }
    Ok(ts)
}

/// Summary figures of a transition system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreStats {
    pub states: usize,
    pub transitions: usize,
    pub initial: usize,
    pub marked: usize,
    pub per_event: Vec<(String, usize)>,
    pub components: Vec<usize>,
}

impl ExploreStats {
    pub fn of(ts: &TransitionSystem, model: &crate::model::Model) -> ExploreStats {
        let mut counts = vec![0usize; model.events.len()];
        for t in &ts.transitions {
            counts[t.event] += 1;
        }
        ExploreStats {
            states: ts.len(),
            transitions: ts.transitions.len(),
            initial: ts.initial.len(),
            marked: ts.marked.iter().filter(|&&m| m).count(),
            per_event: model
                .events
                .iter()
                .zip(counts)
                .filter(|(_, c)| *c > 0)
                .map(|(e, c)| (e.name.clone(), c))
                .collect(),
            components: ts.components(),
        }
    }

    /// Transitions labelled by events whose name ends in `.come` or `.go`.
    pub fn reconfigurations(&self) -> usize {
        self.per_event
            .iter()
            .filter(|(n, _)| n.ends_with(".come") || n.ends_with(".go"))
            .map(|(_, c)| c)
            .sum()
    }
}
