//! Reduced ordered binary decision diagrams.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

/// Reference to a node inside one [`NodeStore`]. `0` is false, `1` is true.
pub type Bdd = u32;

pub const FALSE: Bdd = 0;
pub const TRUE: Bdd = 1;

const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: Bdd,
    hi: Bdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
    Diff,
    Not,
    Ite(Bdd),
    Exists,
    AndExists(Bdd),
    Rename(u32),
    Restrict,
}

/// Effort counters, all monotone over the life of a store.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EffortMetrics {
    pub peak_nodes: usize,
    /// Operation calls that missed the cache and did work.
    pub operations: u64,
    pub cache_hits: u64,
    pub iterations: u64,
    pub gc_runs: u64,
}

static NEXT_STORE_ID: AtomicU32 = AtomicU32::new(1);

pub struct NodeStore {
    id: u32,
    num_vars: u32,
    nodes: Vec<Node>,
    unique: FxHashMap<Node, Bdd>,
    cache: FxHashMap<(Op, Bdd, Bdd), Bdd>,
    cache_capacity: usize,
    renames: Vec<Vec<u32>>,
    metrics: EffortMetrics,
}

impl NodeStore {
    pub fn new(num_vars: u32) -> NodeStore {
        NodeStore::with_cache_capacity(num_vars, 1 << 20)
    }

    pub fn with_cache_capacity(num_vars: u32, cache_capacity: usize) -> NodeStore {
        let terminal = |v| Node {
            var: TERMINAL_VAR,
            lo: v,
            hi: v,
        };
        NodeStore {
            id: NEXT_STORE_ID.fetch_add(1, Ordering::Relaxed),
            num_vars,
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: FxHashMap::default(),
            cache: FxHashMap::default(),
            cache_capacity: cache_capacity.max(1),
            renames: Vec::new(),
            metrics: EffortMetrics {
                peak_nodes: 2,
                ..Default::default()
            },
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn live_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn metrics(&self) -> EffortMetrics {
        self.metrics
    }

    pub fn count_iteration(&mut self) {
        self.metrics.iterations += 1;
    }

    /// Variable at the top of `f`; `u32::MAX` for terminals.
    pub fn var(&self, f: Bdd) -> u32 {
        self.nodes[f as usize].var
    }

    pub fn low(&self, f: Bdd) -> Bdd {
        self.nodes[f as usize].lo
    }

    pub fn high(&self, f: Bdd) -> Bdd {
        self.nodes[f as usize].hi
    }

    pub fn is_terminal(&self, f: Bdd) -> bool {
        f <= TRUE
    }

    fn mk(&mut self, var: u32, lo: Bdd, hi: Bdd) -> Bdd {
        if lo == hi {
            return lo;
        }
        debug_assert!(var < self.var(lo) && var < self.var(hi));
        let node = Node { var, lo, hi };
        if let Some(&r) = self.unique.get(&node) {
            return r;
        }
        let r = self.nodes.len() as Bdd;
        self.nodes.push(node);
        self.unique.insert(node, r);
        if self.nodes.len() > self.metrics.peak_nodes {
            self.metrics.peak_nodes = self.nodes.len();
        }
        r
    }

    fn cached(&mut self, key: (Op, Bdd, Bdd)) -> Option<Bdd> {
        let hit = self.cache.get(&key).copied();
        if hit.is_some() {
            self.metrics.cache_hits += 1;
        }
        hit
    }

    fn remember(&mut self, key: (Op, Bdd, Bdd), r: Bdd) {
        if self.cache.len() >= self.cache_capacity {
            self.cache.clear();
        }
        self.cache.insert(key, r);
    }

    /// The single-variable predicate `x_var`.
    pub fn ithvar(&mut self, var: u32) -> Bdd {
        assert!(var < self.num_vars, "variable {var} outside the store");
        self.mk(var, FALSE, TRUE)
    }

    pub fn nithvar(&mut self, var: u32) -> Bdd {
        assert!(var < self.num_vars, "variable {var} outside the store");
        self.mk(var, TRUE, FALSE)
    }

    /// Conjunction of positive literals: the cube used by quantifiers.
    pub fn cube(&mut self, vars: &[u32]) -> Bdd {
        let mut v: Vec<u32> = vars.to_vec();
        v.sort_unstable();
        v.dedup();
        let mut r = TRUE;
        for &x in v.iter().rev() {
            r = self.mk(x, FALSE, r);
        }
        r
    }

    fn cofactors(&self, f: Bdd, var: u32) -> (Bdd, Bdd) {
        let n = self.nodes[f as usize];
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (f, f)
        }
    }

    pub fn not(&mut self, f: Bdd) -> Bdd {
        match f {
            FALSE => return TRUE,
            TRUE => return FALSE,
            _ => {}
        }
        let key = (Op::Not, f, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let n = self.nodes[f as usize];
        let lo = self.not(n.lo);
        let hi = self.not(n.hi);
        let r = self.mk(n.var, lo, hi);
        self.remember(key, r);
        r
    }

    fn apply(&mut self, op: Op, a: Bdd, b: Bdd) -> Bdd {
        // Terminal cases.
        match op {
            Op::And => {
                if a == FALSE || b == FALSE {
                    return FALSE;
                }
                if a == TRUE || a == b {
                    return b;
                }
                if b == TRUE {
                    return a;
                }
            }
            Op::Or => {
                if a == TRUE || b == TRUE {
                    return TRUE;
                }
                if a == FALSE || a == b {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
            }
            Op::Xor => {
                if a == b {
                    return FALSE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
                if a == TRUE {
                    return self.not(b);
                }
                if b == TRUE {
                    return self.not(a);
                }
            }
            Op::Diff => {
                if a == FALSE || b == TRUE || a == b {
                    return FALSE;
                }
                if b == FALSE {
                    return a;
                }
                if a == TRUE {
                    return self.not(b);
                }
            }
            _ => unreachable!(),
        }
        let (a, b) = if matches!(op, Op::And | Op::Or | Op::Xor) && a > b {
            (b, a)
        } else {
            (a, b)
        };
        let key = (op, a, b);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let var = self.var(a).min(self.var(b));
        let (a0, a1) = self.cofactors(a, var);
        let (b0, b1) = self.cofactors(b, var);
        let lo = self.apply(op, a0, b0);
        let hi = self.apply(op, a1, b1);
        let r = self.mk(var, lo, hi);
        self.remember(key, r);
        r
    }

    pub fn and(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(Op::Or, a, b)
    }

    pub fn xor(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(Op::Xor, a, b)
    }

    /// `a and not b`.
    pub fn diff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        self.apply(Op::Diff, a, b)
    }

    pub fn imp(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let na = self.not(a);
        self.or(na, b)
    }

    pub fn iff(&mut self, a: Bdd, b: Bdd) -> Bdd {
        let x = self.xor(a, b);
        self.not(x)
    }

    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> Bdd {
        if f == TRUE || g == h {
            return g;
        }
        if f == FALSE {
            return h;
        }
        if g == TRUE && h == FALSE {
            return f;
        }
        if g == FALSE && h == TRUE {
            return self.not(f);
        }
        if g == TRUE {
            return self.or(f, h);
        }
        if h == FALSE {
            return self.and(f, g);
        }
        let key = (Op::Ite(f), g, h);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let var = self.var(f).min(self.var(g)).min(self.var(h));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let (h0, h1) = self.cofactors(h, var);
        let lo = self.ite(f0, g0, h0);
        let hi = self.ite(f1, g1, h1);
        let r = self.mk(var, lo, hi);
        self.remember(key, r);
        r
    }

    pub fn and_all(&mut self, items: impl IntoIterator<Item = Bdd>) -> Bdd {
        let mut r = TRUE;
        for x in items {
            r = self.and(r, x);
            if r == FALSE {
                break;
            }
        }
        r
    }

    pub fn or_all(&mut self, items: impl IntoIterator<Item = Bdd>) -> Bdd {
        let mut r = FALSE;
        for x in items {
            r = self.or(r, x);
            if r == TRUE {
                break;
            }
        }
        r
    }

    /// Existential quantification of the variables in `cube`.
    pub fn exists(&mut self, f: Bdd, cube: Bdd) -> Bdd {
        if self.is_terminal(f) || cube == TRUE {
            return f;
        }
        let fv = self.var(f);
        let mut c = cube;
        while c != TRUE && self.var(c) < fv {
            c = self.high(c);
        }
        if c == TRUE {
            return f;
        }
        let key = (Op::Exists, f, c);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let n = self.nodes[f as usize];
        let r = if self.var(c) == n.var {
            let rest = self.high(c);
            let lo = self.exists(n.lo, rest);
            if lo == TRUE {
                TRUE
            } else {
                let hi = self.exists(n.hi, rest);
                self.or(lo, hi)
            }
        } else {
            let lo = self.exists(n.lo, c);
            let hi = self.exists(n.hi, c);
            self.mk(n.var, lo, hi)
        };
        self.remember(key, r);
        r
    }

    pub fn forall(&mut self, f: Bdd, cube: Bdd) -> Bdd {
        let nf = self.not(f);
        let e = self.exists(nf, cube);
        self.not(e)
    }

    /// `exists cube. (a and b)` without building the conjunction.
    pub fn and_exists(&mut self, a: Bdd, b: Bdd, cube: Bdd) -> Bdd {
        if a == FALSE || b == FALSE {
            return FALSE;
        }
        if a == TRUE {
            return self.exists(b, cube);
        }
        if b == TRUE || a == b {
            return self.exists(a, cube);
        }
        let (a, b) = if a > b { (b, a) } else { (a, b) };
        let top = self.var(a).min(self.var(b));
        let mut c = cube;
        while c != TRUE && self.var(c) < top {
            c = self.high(c);
        }
        if c == TRUE {
            return self.and(a, b);
        }
        let key = (Op::AndExists(c), a, b);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let (a0, a1) = self.cofactors(a, top);
        let (b0, b1) = self.cofactors(b, top);
        let r = if self.var(c) == top {
            let rest = self.high(c);
            let lo = self.and_exists(a0, b0, rest);
            if lo == TRUE {
                TRUE
            } else {
                let hi = self.and_exists(a1, b1, rest);
                self.or(lo, hi)
            }
        } else {
            let lo = self.and_exists(a0, b0, c);
            let hi = self.and_exists(a1, b1, c);
            self.mk(top, lo, hi)
        };
        self.remember(key, r);
        r
    }

    /// Registers a variable renaming; `map[v]` is the new index of `v`.
    pub fn register_rename(&mut self, map: Vec<u32>) -> u32 {
        assert_eq!(map.len(), self.num_vars as usize, "rename map must cover every variable");
        if let Some(i) = self.renames.iter().position(|m| *m == map) {
            return i as u32;
        }
        self.renames.push(map);
        (self.renames.len() - 1) as u32
    }

    /// Substitutes variables by a registered renaming. Any permutation is allowed.
    pub fn rename(&mut self, f: Bdd, id: u32) -> Bdd {
        if self.is_terminal(f) {
            return f;
        }
        let key = (Op::Rename(id), f, 0);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let n = self.nodes[f as usize];
        let lo = self.rename(n.lo, id);
        let hi = self.rename(n.hi, id);
        let v = self.renames[id as usize][n.var as usize];
        let r = if v < self.var(lo) && v < self.var(hi) {
            self.mk(v, lo, hi)
        } else {
            let x = self.ithvar(v);
            self.ite(x, hi, lo)
        };
        self.remember(key, r);
        r
    }

    /// Coudert-Madre restrict: agrees with `f` wherever `care` holds, usually smaller.
    pub fn restrict(&mut self, f: Bdd, care: Bdd) -> Bdd {
        if care == FALSE {
            return FALSE;
        }
        if care == TRUE || self.is_terminal(f) {
            return f;
        }
        if f == care {
            return TRUE;
        }
        let key = (Op::Restrict, f, care);
        if let Some(r) = self.cached(key) {
            return r;
        }
        self.metrics.operations += 1;
        let fv = self.var(f);
        let cv = self.var(care);
        let r = if cv < fv {
            let (c0, c1) = (self.low(care), self.high(care));
            let c = self.or(c0, c1);
            self.restrict(f, c)
        } else {
            let (f0, f1) = self.cofactors(f, cv.min(fv));
            let (c0, c1) = self.cofactors(care, cv.min(fv));
            if c0 == FALSE {
                self.restrict(f1, c1)
            } else if c1 == FALSE {
                self.restrict(f0, c0)
            } else {
                let lo = self.restrict(f0, c0);
                let hi = self.restrict(f1, c1);
                self.mk(fv.min(cv), lo, hi)
            }
        };
        self.remember(key, r);
        r
    }

    /// Sorted variables `f` depends on.
    pub fn support(&self, f: Bdd) -> Vec<u32> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut vars = rustc_hash::FxHashSet::default();
        let mut stack = vec![f];
        while let Some(x) = stack.pop() {
            if self.is_terminal(x) || !seen.insert(x) {
                continue;
            }
            let n = self.nodes[x as usize];
            vars.insert(n.var);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        let mut v: Vec<u32> = vars.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Number of internal nodes reachable from `f`.
    pub fn size(&self, f: Bdd) -> usize {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![f];
        while let Some(x) = stack.pop() {
            if self.is_terminal(x) || !seen.insert(x) {
                continue;
            }
            stack.push(self.low(x));
            stack.push(self.high(x));
        }
        seen.len()
    }

    pub fn eval(&self, f: Bdd, assignment: impl Fn(u32) -> bool) -> bool {
        let mut x = f;
        while !self.is_terminal(x) {
            let n = self.nodes[x as usize];
            x = if assignment(n.var) { n.hi } else { n.lo };
        }
        x == TRUE
    }

    /// Exact number of assignments to `vars` satisfying `f`.
    ///
    /// Panics if `f` depends on a variable outside `vars`.
    pub fn sat_count(&self, f: Bdd, vars: &[u32]) -> BigUint {
        let mut order: Vec<u32> = vars.to_vec();
        order.sort_unstable();
        order.dedup();
        let pos = |v: u32| -> usize {
            if v == TERMINAL_VAR {
                order.len()
            } else {
                order
                    .binary_search(&v)
                    .unwrap_or_else(|_| panic!("sat_count: variable {v} not in the counted set"))
            }
        };
        let mut memo: FxHashMap<Bdd, BigUint> = FxHashMap::default();
        // Post-order traversal so children are counted first.
        let mut stack = vec![(f, false)];
        while let Some((x, expanded)) = stack.pop() {
            if self.is_terminal(x) || memo.contains_key(&x) {
                continue;
            }
            let n = self.nodes[x as usize];
            if !expanded {
                stack.push((x, true));
                stack.push((n.lo, false));
                stack.push((n.hi, false));
                continue;
            }
            let p = pos(n.var);
            let mut total = BigUint::zero();
            for child in [n.lo, n.hi] {
                let c = match child {
                    FALSE => BigUint::zero(),
                    TRUE => BigUint::one(),
                    _ => memo[&child].clone(),
                };
                total += c << (pos(self.var(child)) - p - 1);
            }
            memo.insert(x, total);
        }
        let root = match f {
            FALSE => return BigUint::zero(),
            TRUE => BigUint::one(),
            _ => memo[&f].clone(),
        };
        root << pos(self.var(f))
    }

    /// One satisfying assignment as (variable, value) pairs along a path.
    pub fn pick(&self, f: Bdd) -> Option<Vec<(u32, bool)>> {
        if f == FALSE {
            return None;
        }
        let mut out = Vec::new();
        let mut x = f;
        while !self.is_terminal(x) {
            let n = self.nodes[x as usize];
            if n.lo != FALSE {
                out.push((n.var, false));
                x = n.lo;
            } else {
                out.push((n.var, true));
                x = n.hi;
            }
        }
        Some(out)
    }

    /// Frees every node unreachable from `roots`, rewriting the roots in place.
    /// The store takes a fresh id, so handles tagged with the old one are rejected.
    pub fn gc(&mut self, roots: &mut [&mut Bdd]) {
        let mut live = vec![false; self.nodes.len()];
        live[0] = true;
        live[1] = true;
        let mut stack: Vec<Bdd> = roots.iter().map(|r| **r).collect();
        while let Some(x) = stack.pop() {
            if live[x as usize] {
                continue;
            }
            live[x as usize] = true;
            let n = self.nodes[x as usize];
            stack.push(n.lo);
            stack.push(n.hi);
        }
        let mut remap = vec![u32::MAX; self.nodes.len()];
        let mut nodes = Vec::with_capacity(live.iter().filter(|&&l| l).count());
        // Children always precede parents, so one ascending pass suffices.
        for (i, n) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            remap[i] = nodes.len() as u32;
            if i <= 1 {
                nodes.push(*n);
            } else {
                nodes.push(Node {
                    var: n.var,
                    lo: remap[n.lo as usize],
                    hi: remap[n.hi as usize],
                });
            }
        }
        self.unique.clear();
        for (i, n) in nodes.iter().enumerate().skip(2) {
            self.unique.insert(*n, i as Bdd);
        }
        self.nodes = nodes;
        self.cache.clear();
        for r in roots.iter_mut() {
            **r = remap[**r as usize];
        }
        self.metrics.gc_runs += 1;
        self.id = NEXT_STORE_ID.fetch_add(1, Ordering::Relaxed);
    }

    /// Text dump: one `id var low high` line per node reachable from `f`, children first.
    pub fn dump(&self, f: Bdd) -> String {
        let mut order = Vec::new();
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![(f, false)];
        while let Some((x, expanded)) = stack.pop() {
            if self.is_terminal(x) {
                continue;
            }
            if expanded {
                order.push(x);
                continue;
            }
            if !seen.insert(x) {
                continue;
            }
            stack.push((x, true));
            stack.push((self.high(x), false));
            stack.push((self.low(x), false));
        }
        let mut out = format!("root {f}\n");
        for x in order {
            let n = self.nodes[x as usize];
            let _ = writeln!(out, "{x} {} {} {}", n.var, n.lo, n.hi);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contradiction_and_identity() {
        let mut s = NodeStore::new(4);
        let x = s.ithvar(0);
        let nx = s.not(x);
        assert_eq!(s.and(x, nx), FALSE);
        let a = s.ithvar(2);
        assert_eq!(s.or(a, FALSE), a);
    }

    #[test]
    fn exists_all_is_true() {
        let mut s = NodeStore::new(3);
        let a = s.ithvar(0);
        let b = s.nithvar(2);
        let f = s.and(a, b);
        let all = s.cube(&[0, 1, 2]);
        assert_eq!(s.exists(f, all), TRUE);
    }

    #[test]
    fn counting() {
        let s = NodeStore::new(27);
        let vars: Vec<u32> = (0..27).collect();
        assert_eq!(s.sat_count(TRUE, &vars), BigUint::from(134_217_728u32));
        assert_eq!(s.sat_count(FALSE, &vars), BigUint::zero());
        let mut s = NodeStore::new(3);
        let a = s.ithvar(1);
        assert_eq!(s.sat_count(a, &[0, 1, 2]), BigUint::from(4u32));
    }

    #[test]
    fn rename_involution() {
        let mut s = NodeStore::new(4);
        let swap = s.register_rename(vec![1, 0, 3, 2]);
        let a = s.ithvar(0);
        let b = s.nithvar(3);
        let f = s.or(a, b);
        let g = s.rename(f, swap);
        assert_ne!(f, g);
        assert_eq!(s.rename(g, swap), f);
    }

    #[test]
    fn gc_keeps_roots() {
        let mut s = NodeStore::new(6);
        let a = s.ithvar(0);
        let b = s.ithvar(3);
        let mut keep = s.xor(a, b);
        let c = s.ithvar(5);
        let _garbage = s.and(keep, c);
        let before = s.sat_count(keep, &[0, 1, 2, 3, 4, 5]);
        s.gc(&mut [&mut keep]);
        assert_eq!(s.sat_count(keep, &[0, 1, 2, 3, 4, 5]), before);
        assert_eq!(s.live_nodes(), 2 + s.size(keep));
    }

    #[test]
    fn restrict_agrees_on_care_set() {
        let mut s = NodeStore::new(3);
        let a = s.ithvar(0);
        let b = s.ithvar(1);
        let f = s.and(a, b);
        // Where a holds, f is just b.
        assert_eq!(s.restrict(f, a), b);
    }
}
