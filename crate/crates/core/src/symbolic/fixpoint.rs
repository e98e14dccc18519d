//! Reachability and supervisor fixpoints over a [`SymbolicModel`].

use num_bigint::BigUint;

use super::bdd::{Bdd, FALSE};
use super::encode::SymbolicModel;
use super::SymbolicError;

/// Which transitions a traversal follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Every transition the plants and requirement automata permit.
    Full,
    /// Transitions that also satisfy the event's `needs` conditions.
    Allowed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of live nodes before giving up.
    pub max_nodes: usize,
    /// Live node count that triggers garbage collection.
    pub gc_threshold: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 50_000_000,
            gc_threshold: 1 << 21,
        }
    }
}

/// Result of the symbolic supervisor fixpoint.
#[derive(Clone, Debug)]
pub struct SymbolicSupervisor {
    /// Largest controllable, nonblocking set of legal states.
    pub good: Bdd,
    /// States reachable under supervision.
    pub controlled: Bdd,
    /// Outer fixpoint rounds.
    pub iterations: usize,
    /// Size of the candidate set at the start of each round.
    pub sizes: Vec<BigUint>,
}

impl SymbolicModel<'_> {
    fn rel(&self, ev: usize, r: Relation) -> Bdd {
        match r {
            Relation::Full => self.events[ev].full,
            Relation::Allowed => self.events[ev].allowed,
        }
    }

    fn check(&mut self, limits: &Limits, keep: &mut [&mut Bdd]) -> Result<(), SymbolicError> {
        if self.store.live_nodes() > limits.gc_threshold {
            self.gc(keep);
        }
        if self.store.live_nodes() > limits.max_nodes {
            return Err(SymbolicError::Budget {
                nodes: self.store.live_nodes(),
                limit: limits.max_nodes,
            });
        }
        Ok(())
    }

    /// Forward closure of `from` inside `within`.
    ///
    /// May collect garbage: other handles survive only if owned by the model or pinned.
    pub fn reachable(
        &mut self,
        from: Bdd,
        relation: Relation,
        within: Bdd,
        limits: &Limits,
    ) -> Result<Bdd, SymbolicError> {
        let mut within = within;
        let mut reach = self.store.and(from, within);
        let mut frontier = reach;
        while frontier != FALSE {
            self.store.count_iteration();
            let mut new = FALSE;
            for ev in 0..self.events.len() {
                let rel = self.rel(ev, relation);
                let img = self.image(frontier, ev, rel);
                let img = self.store.and(img, within);
                let fresh = self.store.diff(img, reach);
                reach = self.store.or(reach, fresh);
                new = self.store.or(new, fresh);
            }
            frontier = new;
            self.check(limits, &mut [&mut reach, &mut frontier, &mut within])?;
        }
        Ok(reach)
    }

    /// Backward closure of `to` inside `within`.
    pub fn coreachable(
        &mut self,
        to: Bdd,
        relation: Relation,
        within: Bdd,
        limits: &Limits,
    ) -> Result<Bdd, SymbolicError> {
        let mut within = within;
        let mut reach = self.store.and(to, within);
        let mut frontier = reach;
        while frontier != FALSE {
            self.store.count_iteration();
            let mut new = FALSE;
            for ev in 0..self.events.len() {
                let rel = self.rel(ev, relation);
                let pre = self.preimage(frontier, ev, rel);
                let pre = self.store.and(pre, within);
                let fresh = self.store.diff(pre, reach);
                reach = self.store.or(reach, fresh);
                new = self.store.or(new, fresh);
            }
            frontier = new;
            self.check(limits, &mut [&mut reach, &mut frontier, &mut within])?;
        }
        Ok(reach)
    }

    /// Legal states from which an uncontrollable event is possible in the plant but
    /// refused by a requirement automaton or a `needs` condition.
    pub fn blocked_uncontrollable(&mut self) -> Bdd {
        let mut bad = FALSE;
        for ev in 0..self.events.len() {
            if self.events[ev].controllable {
                continue;
            }
            let plant = self.plant_enabled(ev);
            let req = self.req_enabled(ev);
            let ok = self.store.and(req, self.events[ev].needs);
            let refused = self.store.diff(plant, ok);
            bad = self.store.or(bad, refused);
        }
        self.store.and(bad, self.legal)
    }

    /// Computes the maximally permissive supervisor.
    pub fn synthesize(&mut self, limits: &Limits) -> Result<SymbolicSupervisor, SymbolicError> {
        let blocked = self.blocked_uncontrollable();
        let bad = self.store.or(blocked, self.bad_invariant);
        let mut good = self.store.diff(self.legal, bad);
        let mut iterations = 0;
        let mut sizes = Vec::new();
        loop {
            iterations += 1;
            sizes.push(self.count(good));
            let marked = self.store.and(self.marked, good);
            self.pinned.push(good);
            let nonblocking = self.coreachable_into(marked, good, limits);
            good = self.pinned.pop().unwrap_or(FALSE);
            let nonblocking = nonblocking?;
            let outside = self.store.diff(self.legal, nonblocking);
            let mut lost = outside;
            let mut frontier = outside;
            while frontier != FALSE {
                self.store.count_iteration();
                let mut new = FALSE;
                for ev in 0..self.events.len() {
                    if self.events[ev].controllable {
                        continue;
                    }
                    let rel = self.events[ev].full;
                    let pre = self.preimage(frontier, ev, rel);
                    let pre = self.store.and(pre, self.legal);
                    let fresh = self.store.diff(pre, lost);
                    lost = self.store.or(lost, fresh);
                    new = self.store.or(new, fresh);
                }
                frontier = new;
                self.check(limits, &mut [&mut lost, &mut frontier, &mut good])?;
            }
            let next = self.store.diff(good, lost);
            if next == good {
                break;
            }
            good = next;
        }
        self.pinned.push(good);
        let controlled = self.supervised_reachable(good, limits);
        good = self.pinned.pop().unwrap_or(FALSE);
        let controlled = controlled?;
        Ok(SymbolicSupervisor {
            good,
            controlled,
            iterations,
            sizes,
        })
    }

    /// Backward closure over allowed transitions whose source and target lie in `good`.
    fn coreachable_into(&mut self, to: Bdd, good: Bdd, limits: &Limits) -> Result<Bdd, SymbolicError> {
        self.coreachable(to, Relation::Allowed, good, limits)
    }

    /// States reachable from the good initial states along allowed transitions inside `good`.
    pub fn supervised_reachable(&mut self, good: Bdd, limits: &Limits) -> Result<Bdd, SymbolicError> {
        let init = self.initial;
        self.reachable(init, Relation::Allowed, good, limits)
    }

    /// Number of transitions of `relation` from states in `from` into `to`.
    pub fn transitions_between(&mut self, from: Bdd, relation: Relation, to: Bdd) -> BigUint {
        let mut total = BigUint::default();
        for ev in 0..self.events.len() {
            let rel = self.rel(ev, relation);
            total += self.count_transitions(from, ev, rel, to);
        }
        total
    }

    /// Controllable event guards: `needs`, requirement enabling, and all successors good.
    pub fn supervisor_guards(&mut self, good: Bdd) -> Vec<(usize, Bdd)> {
        let mut out = Vec::new();
        let bad_target = self.store.diff(self.legal, good);
        for ev in 0..self.events.len() {
            if !self.events[ev].controllable {
                continue;
            }
            let req = self.req_enabled(ev);
            let full = self.events[ev].full;
            let escapes = self.preimage(bad_target, ev, full);
            let guard = self.store.and(req, self.events[ev].needs);
            let guard = self.store.diff(guard, escapes);
            out.push((self.events[ev].event, guard));
        }
        out
    }
}

/// Exact sizes of the uncontrolled reachable state space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachStats {
    pub states: BigUint,
    pub transitions: BigUint,
    pub initial: BigUint,
    pub marked: BigUint,
}

impl SymbolicModel<'_> {
    /// Reachable states from the initial states along every transition.
    pub fn reach_stats(&mut self, limits: &Limits) -> Result<ReachStats, SymbolicError> {
        let (init, legal) = (self.initial, self.legal);
        let mut reach = self.reachable(init, Relation::Full, legal, limits)?;
        self.pinned.push(reach);
        let transitions = self.transitions_between(reach, Relation::Full, reach);
        reach = self.pinned.pop().unwrap_or(FALSE);
        let marked = self.store.and(reach, self.marked);
        Ok(ReachStats {
            states: self.count(reach),
            transitions,
            initial: self.count(self.initial),
            marked: self.count(marked),
        })
    }
}
