//! Decision diagrams against truth tables.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use plsynth_core::symbolic::{Bdd, NodeStore, FALSE, TRUE};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum F {
    Var(u32),
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    Xor(Box<F>, Box<F>),
    Ite(Box<F>, Box<F>, Box<F>),
}

impl F {
    fn eval(&self, bits: u32) -> bool {
        match self {
            F::Var(v) => bits >> v & 1 == 1,
            F::Not(a) => !a.eval(bits),
            F::And(a, b) => a.eval(bits) && b.eval(bits),
            F::Or(a, b) => a.eval(bits) || b.eval(bits),
            F::Xor(a, b) => a.eval(bits) != b.eval(bits),
            F::Ite(c, t, e) => {
                if c.eval(bits) {
                    t.eval(bits)
                } else {
                    e.eval(bits)
                }
            }
        }
    }

    fn build(&self, s: &mut NodeStore) -> Bdd {
        match self {
            F::Var(v) => s.ithvar(*v),
            F::Not(a) => {
                let a = a.build(s);
                s.not(a)
            }
            F::And(a, b) => {
                let (a, b) = (a.build(s), b.build(s));
                s.and(a, b)
            }
            F::Or(a, b) => {
                let (a, b) = (a.build(s), b.build(s));
                s.or(a, b)
            }
            F::Xor(a, b) => {
                let (a, b) = (a.build(s), b.build(s));
                s.xor(a, b)
            }
            F::Ite(c, t, e) => {
                let (c, t, e) = (c.build(s), t.build(s), e.build(s));
                s.ite(c, t, e)
            }
        }
    }

    /// An equivalent formula of a different shape.
    fn rewrite(&self) -> F {
        let not = |f: F| F::Not(Box::new(f));
        match self {
            F::Var(v) => not(not(F::Var(*v))),
            F::Not(a) => not(a.rewrite()),
            F::And(a, b) => not(F::Or(Box::new(not(b.rewrite())), Box::new(not(a.rewrite())))),
            F::Or(a, b) => F::Ite(Box::new(a.rewrite()), Box::new(F::tautology()), b.clone()),
            F::Xor(a, b) => F::Xor(Box::new(b.rewrite()), Box::new(a.rewrite())),
            F::Ite(c, t, e) => F::Or(
                Box::new(F::And(c.clone(), Box::new(t.rewrite()))),
                Box::new(F::And(Box::new(not(c.rewrite())), Box::new(e.rewrite()))),
            ),
        }
    }

    fn tautology() -> F {
        F::Or(Box::new(F::Var(0)), Box::new(F::Not(Box::new(F::Var(0)))))
    }
}

fn table(f: &F, n: u32) -> Vec<bool> {
    (0..1u32 << n).map(|b| f.eval(b)).collect()
}

fn bdd_table(s: &NodeStore, f: Bdd, n: u32) -> Vec<bool> {
    (0..1u32 << n).map(|b| s.eval(f, |v| b >> v & 1 == 1)).collect()
}

fn arb_formula(n: u32) -> impl Strategy<Value = F> {
    let leaf = (0..n).prop_map(F::Var);
    leaf.prop_recursive(6, 64, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| F::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| F::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| F::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| F::Xor(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone(), inner).prop_map(|(c, t, e)| F::Ite(Box::new(c), Box::new(t), Box::new(e))),
        ]
    })
}

fn with_vars(max: u32) -> impl Strategy<Value = (u32, F, F)> {
    (1..=max).prop_flat_map(|n| (Just(n), arb_formula(n), arb_formula(n)))
}

/// Checks reduction and ordering of every node below `f`.
fn assert_reduced(s: &NodeStore, f: Bdd) {
    let mut seen = HashSet::new();
    let mut triples = HashMap::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if s.is_terminal(g) || !seen.insert(g) {
            continue;
        }
        let (v, lo, hi) = (s.var(g), s.low(g), s.high(g));
        assert_ne!(lo, hi, "redundant node");
        for c in [lo, hi] {
            if !s.is_terminal(c) {
                assert!(s.var(c) > v, "order violated");
            }
        }
        assert_eq!(*triples.entry((v, lo, hi)).or_insert(g), g, "duplicate node");
        stack.extend([lo, hi]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn equivalence_is_root_identity((n, f, g) in with_vars(12)) {
        let mut s = NodeStore::new(n);
        let (a, b) = (f.build(&mut s), g.build(&mut s));
        let (ta, tb) = (table(&f, n), table(&g, n));
        prop_assert_eq!(bdd_table(&s, a, n), ta.clone());
        prop_assert_eq!(a == b, ta == tb);
        let r = f.rewrite().build(&mut s);
        prop_assert_eq!(r, a);
        assert_reduced(&s, a);
        assert_reduced(&s, b);
    }

    #[test]
    fn counting_and_quantifiers_match_the_table((n, f, care) in with_vars(12), v in 0u32..12) {
        let v = v % n;
        let mut s = NodeStore::new(n);
        let a = f.build(&mut s);
        let vars: Vec<u32> = (0..n).collect();
        let t = table(&f, n);
        prop_assert_eq!(s.sat_count(a, &vars), BigUint::from(t.iter().filter(|&&x| x).count()));
        let cube = s.cube(&[v]);
        let ex = s.exists(a, cube);
        let all = s.forall(a, cube);
        for bits in 0..1u32 << n {
            let (lo, hi) = (t[(bits & !(1 << v)) as usize], t[(bits | 1 << v) as usize]);
            prop_assert_eq!(s.eval(ex, |x| bits >> x & 1 == 1), lo || hi);
            prop_assert_eq!(s.eval(all, |x| bits >> x & 1 == 1), lo && hi);
        }
        prop_assert!(!s.support(ex).contains(&v));
        let c = care.build(&mut s);
        let r = s.restrict(a, c);
        let tc = table(&care, n);
        for bits in 0..1u32 << n {
            if tc[bits as usize] {
                prop_assert_eq!(s.eval(r, |x| bits >> x & 1 == 1), t[bits as usize]);
            }
        }
    }

    #[test]
    fn wide_equivalence_on_sixteen_variables(f in arb_formula(16)) {
        let mut s = NodeStore::new(16);
        let a = f.build(&mut s);
        prop_assert_eq!(bdd_table(&s, a, 16), table(&f, 16));
        let r = f.rewrite().build(&mut s);
        prop_assert_eq!(r, a);
    }

    #[test]
    fn metrics_never_decrease(fs in prop::collection::vec(arb_formula(10), 1..8)) {
        let mut s = NodeStore::new(10);
        let mut last = s.metrics();
        for f in &fs {
            let g = f.build(&mut s);
            let h = s.not(g);
            let _ = s.and(g, h);
            let m = s.metrics();
            prop_assert!(m.peak_nodes >= last.peak_nodes);
            prop_assert!(m.operations >= last.operations);
            prop_assert!(m.cache_hits >= last.cache_hits);
            prop_assert!(m.peak_nodes >= s.live_nodes());
            last = m;
        }
    }
}

#[test]
fn counts_are_exact_beyond_machine_words() {
    let s = NodeStore::new(130);
    let vars: Vec<u32> = (0..27).collect();
    assert_eq!(s.sat_count(TRUE, &vars), BigUint::from(134_217_728u64));
    assert_eq!(s.sat_count(FALSE, &vars), BigUint::default());
    let wide: Vec<u32> = (0..130).collect();
    assert_eq!(s.sat_count(TRUE, &wide), BigUint::from(1u8) << 130);
}

#[test]
fn one_variable_halves_the_count() {
    let mut s = NodeStore::new(100);
    let x = s.ithvar(42);
    let vars: Vec<u32> = (0..100).collect();
    assert_eq!(s.sat_count(x, &vars), BigUint::from(1u8) << 99);
}
