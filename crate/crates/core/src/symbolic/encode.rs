//! Bit-level encoding of a [`Model`] into decision diagrams.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use super::bdd::{Bdd, NodeStore, FALSE, TRUE};
use super::SymbolicError;
use crate::lang::ast::BinOp;
use crate::model::{AutId, EventId, Expr, Kind, Model, Type, VarId, VarInit};

/// Order of the encoded state variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VarOrder {
    /// Automata in declaration order, each followed by its variables.
    #[default]
    Declaration,
    /// Like `Declaration`, but variables of single-location automata that guard a
    /// component's events are placed right before that component.
    FeatureAdjacent,
}

#[derive(Clone, Copy, Debug)]
pub struct EncodeOptions {
    pub order: VarOrder,
    /// Upper bound on the number of encoded state bits.
    pub max_bits: u32,
    pub cache_capacity: usize,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            order: VarOrder::Declaration,
            max_bits: 4096,
            cache_capacity: 1 << 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Location(AutId),
    Var(VarId),
}

/// One encoded model variable: a location pointer or a discrete variable.
#[derive(Clone, Debug)]
pub struct Slot {
    pub kind: SlotKind,
    pub size: u64,
    /// Value encoded by code 0.
    pub offset: i64,
    /// Global bit indices, most significant first.
    pub bits: Vec<u32>,
}

pub fn cur(bit: u32) -> u32 {
    2 * bit
}

pub fn next(bit: u32) -> u32 {
    2 * bit + 1
}

fn bits_for(size: u64) -> u32 {
    if size <= 1 {
        0
    } else {
        64 - (size - 1).leading_zeros()
    }
}

/// Partitioned value of an integer or enumeration expression.
type Partition = BTreeMap<i64, Bdd>;

enum Val {
    Bool(Bdd),
    Int(Partition),
}

/// Transition data for one event.
#[derive(Clone, Debug)]
pub struct EventRel {
    pub event: EventId,
    pub controllable: bool,
    /// Joint behaviour of the plant automata, over current bits and next bits of `plant_slots`.
    pub plant: Bdd,
    /// Joint behaviour of requirement and supervisor automata.
    pub req: Bdd,
    /// Conjunction of the event's `needs` conditions.
    pub needs: Bdd,
    /// `plant and req`: the uncontrolled transition relation.
    pub full: Bdd,
    /// `full and needs`.
    pub allowed: Bdd,
    pub slots: Vec<usize>,
    pub plant_slots: Vec<usize>,
    pub swap: u32,
    pub plant_swap: u32,
    pub cur_cube: Bdd,
    pub next_cube: Bdd,
    pub plant_next_cube: Bdd,
}

pub struct SymbolicModel<'m> {
    pub model: &'m Model,
    pub store: NodeStore,
    pub slots: Vec<Slot>,
    pub loc_slot: Vec<Option<usize>>,
    pub var_slot: Vec<Option<usize>>,
    pub num_bits: u32,
    /// Valid codes for every slot.
    pub domain: Bdd,
    /// `domain` and every plant invariant.
    pub legal: Bdd,
    pub initial: Bdd,
    pub marked: Bdd,
    /// States violating a state-invariant requirement.
    pub bad_invariant: Bdd,
    pub events: Vec<EventRel>,
    /// Extra roots kept alive across garbage collection.
    pub pinned: Vec<Bdd>,
    alg_cache: FxHashMap<usize, Partition>,
    alg_bool_cache: FxHashMap<usize, Bdd>,
}

impl<'m> SymbolicModel<'m> {
    pub fn encode(model: &'m Model, opts: &EncodeOptions) -> Result<SymbolicModel<'m>, SymbolicError> {
        let order = slot_order(model, opts.order);
        let mut slots = Vec::new();
        let mut loc_slot = vec![None; model.automata.len()];
        let mut var_slot = vec![None; model.vars.len()];
        let mut num_bits = 0u32;
        for kind in order {
            let (size, offset) = match kind {
                SlotKind::Location(a) => (model.automata[a].locations.len() as u64, 0),
                SlotKind::Var(v) => {
                    let ty = model.vars[v].ty;
                    (ty.domain_size(model), ty.min())
                }
            };
            let nb = bits_for(size);
            if nb == 0 {
                continue;
            }
            if num_bits + nb > opts.max_bits {
                return Err(SymbolicError::DomainTooLarge {
                    bits: num_bits + nb,
                    limit: opts.max_bits,
                });
            }
            let bits = (num_bits..num_bits + nb).collect();
            num_bits += nb;
            match kind {
                SlotKind::Location(a) => loc_slot[a] = Some(slots.len()),
                SlotKind::Var(v) => var_slot[v] = Some(slots.len()),
            }
            slots.push(Slot {
                kind,
                size,
                offset,
                bits,
            });
        }
        let store = NodeStore::with_cache_capacity(2 * num_bits.max(1), opts.cache_capacity);
        let mut sm = SymbolicModel {
            model,
            store,
            slots,
            loc_slot,
            var_slot,
            num_bits,
            domain: TRUE,
            legal: TRUE,
            initial: FALSE,
            marked: FALSE,
            bad_invariant: FALSE,
            events: Vec::new(),
            pinned: Vec::new(),
            alg_cache: FxHashMap::default(),
            alg_bool_cache: FxHashMap::default(),
        };
        sm.build()?;
        Ok(sm)
    }

    fn build(&mut self) -> Result<(), SymbolicError> {
        let model = self.model;
        let mut domain = TRUE;
        for s in 0..self.slots.len() {
            let d = self.code_below(s, self.slots[s].size, false);
            domain = self.store.and(domain, d);
        }
        self.domain = domain;
        let mut legal = domain;
        for inv in &model.plant_invariants {
            let b = self.bool_expr(inv)?;
            legal = self.store.and(legal, b);
        }
        self.legal = legal;

        let mut bad = FALSE;
        for r in &model.requirements {
            if let crate::model::Requirement::Invariant(e) = r {
                let b = self.bool_expr(e)?;
                let nb = self.store.not(b);
                bad = self.store.or(bad, nb);
            }
        }
        self.bad_invariant = self.store.and(bad, legal);

        let mut initial = legal;
        let mut marked = TRUE;
        for (a, aut) in model.automata.iter().enumerate() {
            let mut init_a = FALSE;
            let mut marked_a = FALSE;
            for (l, loc) in aut.locations.iter().enumerate() {
                let at = self.loc_is(a, l, false);
                if let Some(pred) = &loc.initial {
                    let p = self.bool_expr(pred)?;
                    let x = self.store.and(at, p);
                    init_a = self.store.or(init_a, x);
                }
                if loc.marked {
                    marked_a = self.store.or(marked_a, at);
                }
            }
            initial = self.store.and(initial, init_a);
            marked = self.store.and(marked, marked_a);
        }
        for (v, var) in model.vars.iter().enumerate() {
            if let VarInit::Value(x) = var.init {
                let eq = self.var_is(v, x, false);
                initial = self.store.and(initial, eq);
            }
        }
        self.initial = initial;
        self.marked = self.store.and(marked, legal);

        let mut needs: Vec<Bdd> = vec![TRUE; model.events.len()];
        for r in &model.requirements {
            if let crate::model::Requirement::Needs { event, condition } = r {
                let c = self.bool_expr(condition)?;
                needs[*event] = self.store.and(needs[*event], c);
            }
        }

        for e in 0..model.events.len() {
            let auts: Vec<usize> = (0..model.automata.len())
                .filter(|&a| model.automata[a].has_event(e))
                .collect();
            if auts.is_empty() {
                continue;
            }
            let mut plant_slots = Vec::new();
            let mut req_slots = Vec::new();
            let mut per_aut = Vec::new();
            for &a in &auts {
                let s = self.participating_slots(a, e);
                if model.automata[a].kind == Kind::Plant {
                    plant_slots.extend(&s);
                } else {
                    req_slots.extend(&s);
                }
                per_aut.push((a, s));
            }
            let mut plant = TRUE;
            let mut req = TRUE;
            for (a, s) in &per_aut {
                let rel = self.automaton_relation(*a, e, s)?;
                if model.automata[*a].kind == Kind::Plant {
                    plant = self.store.and(plant, rel);
                } else {
                    req = self.store.and(req, rel);
                }
            }
            let mut slots: Vec<usize> = plant_slots.iter().chain(&req_slots).copied().collect();
            slots.sort_unstable();
            slots.dedup();
            plant_slots.sort_unstable();
            plant_slots.dedup();
            let full = self.store.and(plant, req);
            let allowed = self.store.and(full, needs[e]);
            let swap = self.swap_rename(&slots);
            let plant_swap = self.swap_rename(&plant_slots);
            let cur_cube = self.cube_of(&slots, false);
            let next_cube = self.cube_of(&slots, true);
            let plant_next_cube = self.cube_of(&plant_slots, true);
            self.events.push(EventRel {
                event: e,
                controllable: model.events[e].controllable,
                plant,
                req,
                needs: needs[e],
                full,
                allowed,
                slots,
                plant_slots,
                swap,
                plant_swap,
                cur_cube,
                next_cube,
                plant_next_cube,
            });
        }
        Ok(())
    }

    /// Slots whose value can change when automaton `a` takes part in `e`.
    fn participating_slots(&self, a: usize, e: EventId) -> Vec<usize> {
        let aut = &self.model.automata[a];
        let mut s = Vec::new();
        if let Some(ls) = self.loc_slot[a] {
            if aut.edges.iter().any(|ed| ed.event == e && ed.source != ed.target) {
                s.push(ls);
            }
        }
        for ed in aut.edges.iter().filter(|ed| ed.event == e) {
            for (v, _) in &ed.updates {
                if let Some(vs) = self.var_slot[*v] {
                    s.push(vs);
                }
            }
        }
        s.sort_unstable();
        s.dedup();
        s
    }

    fn automaton_relation(&mut self, a: usize, e: EventId, slots: &[usize]) -> Result<Bdd, SymbolicError> {
        let model = self.model;
        let aut = &model.automata[a];
        let mut rel = FALSE;
        let mut enabled = FALSE;
        for ed in aut.edges.iter().filter(|ed| ed.event == e) {
            let at = self.loc_is(a, ed.source, false);
            let g = self.bool_expr(&ed.guard)?;
            let en = self.store.and(at, g);
            enabled = self.store.or(enabled, en);
            let mut t = en;
            let loc_slot = self.loc_slot[a];
            if let Some(ls) = loc_slot.filter(|ls| slots.contains(ls)) {
                let code = ed.target as u64;
                let tgt = self.slot_is(ls, code, true);
                t = self.store.and(t, tgt);
            }
            for &s in slots {
                if Some(s) == loc_slot {
                    continue;
                }
                let SlotKind::Var(v) = self.slots[s].kind else {
                    continue;
                };
                let upd = match ed.updates.iter().find(|(x, _)| *x == v) {
                    Some((_, value)) => self.assignment(v, value)?,
                    None => self.slot_frame(s),
                };
                t = self.store.and(t, upd);
                if t == FALSE {
                    break;
                }
            }
            rel = self.store.or(rel, t);
        }
        if aut.monitors(e) {
            let idle = self.store.not(enabled);
            let mut stay = idle;
            for &s in slots {
                let f = self.slot_frame(s);
                stay = self.store.and(stay, f);
            }
            rel = self.store.or(rel, stay);
        }
        Ok(rel)
    }

    /// `next(v) = value(cur)`; assignments of values outside the domain are disabled.
    fn assignment(&mut self, v: VarId, value: &Expr) -> Result<Bdd, SymbolicError> {
        let ty = self.model.vars[v].ty;
        match self.expr(value)? {
            Val::Bool(b) => {
                let target = self.var_is(v, 1, true);
                Ok(self.store.iff(target, b))
            }
            Val::Int(p) => {
                let mut r = FALSE;
                for (x, cond) in p {
                    if !ty.contains(self.model, x) {
                        continue;
                    }
                    let t = self.var_is(v, x, true);
                    let c = self.store.and(cond, t);
                    r = self.store.or(r, c);
                }
                Ok(r)
            }
        }
    }

    fn slot_frame(&mut self, s: usize) -> Bdd {
        let bits = self.slots[s].bits.clone();
        let mut r = TRUE;
        for &b in bits.iter().rev() {
            let c = self.store.ithvar(cur(b));
            let n = self.store.ithvar(next(b));
            let eq = self.store.iff(c, n);
            r = self.store.and(eq, r);
        }
        r
    }

    fn cube_of(&mut self, slots: &[usize], is_next: bool) -> Bdd {
        let vars: Vec<u32> = slots
            .iter()
            .flat_map(|&s| self.slots[s].bits.iter().map(move |&b| if is_next { next(b) } else { cur(b) }))
            .collect();
        self.store.cube(&vars)
    }

    fn swap_rename(&mut self, slots: &[usize]) -> u32 {
        let mut map: Vec<u32> = (0..self.store.num_vars()).collect();
        for &s in slots {
            for &b in &self.slots[s].bits {
                map[cur(b) as usize] = next(b);
                map[next(b) as usize] = cur(b);
            }
        }
        self.store.register_rename(map)
    }

    /// All current-state bit variables.
    pub fn cur_vars(&self) -> Vec<u32> {
        (0..self.num_bits).map(cur).collect()
    }

    /// Current-state variables of the given slots.
    pub fn slot_vars(&self, slots: &[usize]) -> Vec<u32> {
        slots
            .iter()
            .flat_map(|&s| self.slots[s].bits.iter().map(|&b| cur(b)))
            .collect()
    }

    /// `slot == code`, on current or next bits.
    pub fn slot_is(&mut self, s: usize, code: u64, is_next: bool) -> Bdd {
        let bits = self.slots[s].bits.clone();
        let n = bits.len();
        let mut r = TRUE;
        for (i, &b) in bits.iter().enumerate().rev() {
            let bit = (code >> (n - 1 - i)) & 1 == 1;
            let v = if is_next { next(b) } else { cur(b) };
            let lit = if bit {
                self.store.ithvar(v)
            } else {
                self.store.nithvar(v)
            };
            r = self.store.and(lit, r);
        }
        r
    }

    /// `slot < bound` as an unsigned code comparison.
    fn code_below(&mut self, s: usize, bound: u64, is_next: bool) -> Bdd {
        let bits = self.slots[s].bits.clone();
        let n = bits.len();
        if bound >= 1u64 << n {
            return TRUE;
        }
        // Walk from the least significant bit upwards.
        let mut r = FALSE;
        for (i, &b) in bits.iter().enumerate().rev() {
            let v = if is_next { next(b) } else { cur(b) };
            let lit = self.store.ithvar(v);
            let bit = (bound >> (n - 1 - i)) & 1 == 1;
            r = if bit {
                // code bit 0 means below regardless of lower bits; 1 means compare lower bits.
                let nl = self.store.not(lit);
                let keep = self.store.and(lit, r);
                self.store.or(nl, keep)
            } else {
                let nl = self.store.not(lit);
                self.store.and(nl, r)
            };
        }
        r
    }

    /// Automaton `a` is at location `l`.
    pub fn loc_is(&mut self, a: AutId, l: usize, is_next: bool) -> Bdd {
        match self.loc_slot[a] {
            Some(s) => self.slot_is(s, l as u64, is_next),
            None => {
                if l == 0 {
                    TRUE
                } else {
                    FALSE
                }
            }
        }
    }

    /// Variable `v` has value `x`.
    pub fn var_is(&mut self, v: VarId, x: i64, is_next: bool) -> Bdd {
        let ty = self.model.vars[v].ty;
        if !ty.contains(self.model, x) {
            return FALSE;
        }
        match self.var_slot[v] {
            Some(s) => {
                let code = (x - self.slots[s].offset) as u64;
                self.slot_is(s, code, is_next)
            }
            None => TRUE,
        }
    }

    pub fn bool_expr(&mut self, e: &Expr) -> Result<Bdd, SymbolicError> {
        match self.expr(e)? {
            Val::Bool(b) => Ok(b),
            Val::Int(_) => Err(SymbolicError::Type(self.model.display(e).to_string())),
        }
    }

    fn partition(&mut self, e: &Expr) -> Result<Partition, SymbolicError> {
        match self.expr(e)? {
            Val::Int(p) => Ok(p),
            Val::Bool(_) => Err(SymbolicError::Type(self.model.display(e).to_string())),
        }
    }

    fn expr(&mut self, e: &Expr) -> Result<Val, SymbolicError> {
        let model = self.model;
        Ok(match e {
            Expr::Bool(b) => Val::Bool(if *b { TRUE } else { FALSE }),
            Expr::Int(n) => Val::Int(BTreeMap::from([(*n, TRUE)])),
            Expr::Enum(_, i) => Val::Int(BTreeMap::from([(*i as i64, TRUE)])),
            Expr::Loc(a, l) => Val::Bool(self.loc_is(*a, *l, false)),
            Expr::Var(v) => {
                let ty = model.vars[*v].ty;
                match ty {
                    Type::Bool => Val::Bool(self.var_is(*v, 1, false)),
                    _ => {
                        let mut p = BTreeMap::new();
                        for x in ty.min()..=ty.max(model) {
                            let c = self.var_is(*v, x, false);
                            p.insert(x, c);
                        }
                        Val::Int(p)
                    }
                }
            }
            Expr::Alg(a) => {
                if let Some(b) = self.alg_bool_cache.get(a) {
                    return Ok(Val::Bool(*b));
                }
                if let Some(p) = self.alg_cache.get(a) {
                    return Ok(Val::Int(p.clone()));
                }
                let v = self.expr(&model.algs[*a].def)?;
                match &v {
                    Val::Bool(b) => {
                        self.alg_bool_cache.insert(*a, *b);
                    }
                    Val::Int(p) => {
                        self.alg_cache.insert(*a, p.clone());
                    }
                }
                v
            }
            Expr::Not(x) => {
                let b = self.bool_expr(x)?;
                Val::Bool(self.store.not(b))
            }
            Expr::Neg(x) => {
                let p = self.partition(x)?;
                let mut out = BTreeMap::new();
                for (v, c) in p {
                    let n = v.checked_neg().ok_or_else(|| SymbolicError::Overflow(model.display(e).to_string()))?;
                    merge(&mut self.store, &mut out, n, c);
                }
                Val::Int(out)
            }
            Expr::If(c, t, f) => {
                let c = self.bool_expr(c)?;
                match (self.expr(t)?, self.expr(f)?) {
                    (Val::Bool(t), Val::Bool(f)) => Val::Bool(self.store.ite(c, t, f)),
                    (Val::Int(t), Val::Int(f)) => {
                        let nc = self.store.not(c);
                        let mut out = BTreeMap::new();
                        for (v, x) in t {
                            let g = self.store.and(c, x);
                            merge(&mut self.store, &mut out, v, g);
                        }
                        for (v, x) in f {
                            let g = self.store.and(nc, x);
                            merge(&mut self.store, &mut out, v, g);
                        }
                        Val::Int(out)
                    }
                    _ => return Err(SymbolicError::Type(model.display(e).to_string())),
                }
            }
            Expr::Bin(op, a, b) => match op {
                BinOp::And | BinOp::Or | BinOp::Implies | BinOp::Iff => {
                    let x = self.bool_expr(a)?;
                    if *op == BinOp::And && x == FALSE {
                        return Ok(Val::Bool(FALSE));
                    }
                    let y = self.bool_expr(b)?;
                    Val::Bool(match op {
                        BinOp::And => self.store.and(x, y),
                        BinOp::Or => self.store.or(x, y),
                        BinOp::Implies => self.store.imp(x, y),
                        _ => self.store.iff(x, y),
                    })
                }
                _ => match (self.expr(a)?, self.expr(b)?) {
                    (Val::Bool(x), Val::Bool(y)) => match op {
                        BinOp::Eq => Val::Bool(self.store.iff(x, y)),
                        BinOp::Ne => Val::Bool(self.store.xor(x, y)),
                        _ => return Err(SymbolicError::Type(model.display(e).to_string())),
                    },
                    (Val::Int(x), Val::Int(y)) => {
                        let compare = op.is_comparison();
                        let mut bool_out = FALSE;
                        let mut int_out = BTreeMap::new();
                        for (&vx, &cx) in &x {
                            for (&vy, &cy) in &y {
                                if compare {
                                    let holds = match op {
                                        BinOp::Eq => vx == vy,
                                        BinOp::Ne => vx != vy,
                                        BinOp::Lt => vx < vy,
                                        BinOp::Le => vx <= vy,
                                        BinOp::Gt => vx > vy,
                                        _ => vx >= vy,
                                    };
                                    if holds {
                                        let c = self.store.and(cx, cy);
                                        bool_out = self.store.or(bool_out, c);
                                    }
                                } else {
                                    let v = match op {
                                        BinOp::Add => vx.checked_add(vy),
                                        BinOp::Sub => vx.checked_sub(vy),
                                        _ => vx.checked_mul(vy),
                                    }
                                    .ok_or_else(|| SymbolicError::Overflow(model.display(e).to_string()))?;
                                    let c = self.store.and(cx, cy);
                                    merge(&mut self.store, &mut int_out, v, c);
                                }
                            }
                        }
                        if compare {
                            Val::Bool(bool_out)
                        } else {
                            Val::Int(int_out)
                        }
                    }
                    _ => return Err(SymbolicError::Type(model.display(e).to_string())),
                },
            },
        })
    }

    /// Image of `x` under relation `rel` of event `ev`, restricted to legal states.
    pub fn image(&mut self, x: Bdd, ev: usize, rel: Bdd) -> Bdd {
        let (cube, swap) = (self.events[ev].cur_cube, self.events[ev].swap);
        let post = self.store.and_exists(x, rel, cube);
        let post = self.store.rename(post, swap);
        self.store.and(post, self.legal)
    }

    /// States with a `rel`-transition of event `ev` into `y`.
    pub fn preimage(&mut self, y: Bdd, ev: usize, rel: Bdd) -> Bdd {
        let (cube, swap) = (self.events[ev].next_cube, self.events[ev].swap);
        let y_next = self.store.rename(y, swap);
        self.store.and_exists(rel, y_next, cube)
    }

    /// States where the plant automata can perform event `ev` into a legal state.
    pub fn plant_enabled(&mut self, ev: usize) -> Bdd {
        let (plant, cube, swap) = (
            self.events[ev].plant,
            self.events[ev].plant_next_cube,
            self.events[ev].plant_swap,
        );
        let legal_next = self.store.rename(self.legal, swap);
        self.store.and_exists(plant, legal_next, cube)
    }

    /// States where every requirement automaton can take part in `ev`.
    pub fn req_enabled(&mut self, ev: usize) -> Bdd {
        let (req, cube) = (self.events[ev].req, self.events[ev].next_cube);
        self.store.exists(req, cube)
    }

    /// Exact number of states in `x` (a current-state predicate).
    pub fn count(&self, x: Bdd) -> BigUint {
        self.store.sat_count(x, &self.cur_vars())
    }

    /// Number of `(source, target)` pairs with source in `from` and target in `to` under `rel`.
    pub fn count_transitions(&mut self, from: Bdd, ev: usize, rel: Bdd, to: Bdd) -> BigUint {
        let swap = self.events[ev].swap;
        let to_next = self.store.rename(to, swap);
        let a = self.store.and(from, rel);
        let a = self.store.and(a, to_next);
        let mut vars = self.cur_vars();
        for &s in &self.events[ev].slots {
            vars.extend(self.slots[s].bits.iter().map(|&b| next(b)));
        }
        self.store.sat_count(a, &vars)
    }

    /// Decodes one state of `x`, unconstrained bits taken as 0.
    pub fn pick_state(&self, x: Bdd) -> Option<Vec<i32>> {
        let path = self.store.pick(x)?;
        let mut bits = vec![false; self.num_bits as usize];
        for (v, val) in path {
            if v % 2 == 0 {
                bits[(v / 2) as usize] = val;
            }
        }
        let mut state = vec![0i32; self.model.state_len()];
        for (v, var) in self.model.vars.iter().enumerate() {
            state[self.model.var_slot(v)] = var.ty.min() as i32;
        }
        for s in &self.slots {
            let mut code = 0u64;
            for &b in &s.bits {
                code = (code << 1) | bits[b as usize] as u64;
            }
            let value = s.offset + code as i64;
            match s.kind {
                SlotKind::Location(a) => state[a] = value as i32,
                SlotKind::Var(v) => state[self.model.var_slot(v)] = value as i32,
            }
        }
        Some(state)
    }

    /// The predicate holding exactly at one explicit state vector.
    pub fn state_bdd(&mut self, state: &[i32]) -> Bdd {
        let mut r = TRUE;
        for s in (0..self.slots.len()).rev() {
            let value = match self.slots[s].kind {
                SlotKind::Location(a) => state[a] as i64,
                SlotKind::Var(v) => state[self.model.var_slot(v)] as i64,
            };
            let code = (value - self.slots[s].offset) as u64;
            let eq = self.slot_is(s, code, false);
            r = self.store.and(eq, r);
        }
        r
    }

    /// Every BDD root held by the model, for garbage collection.
    pub fn roots_mut(&mut self) -> Vec<&mut Bdd> {
        let mut roots: Vec<&mut Bdd> = vec![
            &mut self.domain,
            &mut self.legal,
            &mut self.initial,
            &mut self.marked,
            &mut self.bad_invariant,
        ];
        for ev in &mut self.events {
            roots.extend([
                &mut ev.plant,
                &mut ev.req,
                &mut ev.needs,
                &mut ev.full,
                &mut ev.allowed,
                &mut ev.cur_cube,
                &mut ev.next_cube,
                &mut ev.plant_next_cube,
            ]);
        }
        roots.extend(self.pinned.iter_mut());
        for b in self.alg_bool_cache.values_mut() {
            roots.push(b);
        }
        for p in self.alg_cache.values_mut() {
            roots.extend(p.values_mut());
        }
        roots
    }

    /// Collects garbage, keeping the model's own roots and `extra`.
    pub fn gc(&mut self, extra: &mut [&mut Bdd]) {
        let mut store = std::mem::replace(&mut self.store, NodeStore::new(0));
        {
            let mut roots = self.roots_mut();
            for x in extra.iter_mut() {
                roots.push(&mut **x);
            }
            store.gc(&mut roots);
        }
        self.store = store;
    }
}

fn merge(store: &mut NodeStore, p: &mut Partition, v: i64, c: Bdd) {
    if c == FALSE {
        return;
    }
    let slot = p.entry(v).or_insert(FALSE);
    *slot = store.or(*slot, c);
}

fn slot_order(model: &Model, order: VarOrder) -> Vec<SlotKind> {
    let own = |a: usize| {
        std::iter::once(SlotKind::Location(a)).chain(
            model.automata[a]
                .vars
                .iter()
                .map(|&v| SlotKind::Var(v)),
        )
    };
    match order {
        VarOrder::Declaration => (0..model.automata.len()).flat_map(own).collect(),
        VarOrder::FeatureAdjacent => {
            let mut placed = vec![false; model.automata.len()];
            let mut out = Vec::new();
            let single = |a: usize| model.automata[a].locations.len() == 1;
            for a in 0..model.automata.len() {
                if placed[a] || single(a) {
                    continue;
                }
                let alphabet = &model.automata[a].alphabet;
                for (b, other) in model.automata.iter().enumerate() {
                    for ed in other.edges.iter().filter(|ed| alphabet.binary_search(&ed.event).is_ok()) {
                        ed.guard.visit(&mut |x| {
                            if let Expr::Var(v) = x {
                                let owner = model.vars[*v].owner;
                                if owner != a && single(owner) && !placed[owner] {
                                    placed[owner] = true;
                                    out.extend(own(owner));
                                }
                            }
                        });
                    }
                    let _ = b;
                }
                placed[a] = true;
                out.extend(own(a));
            }
            for a in 0..model.automata.len() {
                if !placed[a] {
                    out.extend(own(a));
                }
            }
            out
        }
    }
}
