//! Seeded generators of small models, for property tests and benchmarks.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::feature::{Feature, FeatureConstraint, FeatureModel};
use crate::lang::ast::RelationKind;

/// Size limits of [`random_spec`].
#[derive(Clone, Copy, Debug)]
pub struct RandomSpecOptions {
    pub max_plants: usize,
    pub max_locations: usize,
    pub max_events: usize,
    /// Upper bound of the integer counter variable, when present.
    pub counter_max: i64,
}

impl Default for RandomSpecOptions {
    fn default() -> Self {
        RandomSpecOptions {
            max_plants: 5,
            max_locations: 5,
            max_events: 6,
            counter_max: 3,
        }
    }
}

fn subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// Text of a random specification with plants, a counter, requirement automata,
/// event conditions, state invariants and plant invariants.
///
/// Requirement automata are deterministic and updates stay in range, so the
/// model is accepted by every engine.
pub fn random_spec<R: Rng>(rng: &mut R, opts: &RandomSpecOptions) -> String {
    let mut out = String::new();
    let n_events = rng.gen_range(3..=opts.max_events.max(3));
    let events: Vec<String> = (0..n_events)
        .map(|i| if rng.gen_bool(0.6) { format!("c{i}") } else { format!("u{i}") })
        .collect();
    let (c, u): (Vec<&String>, Vec<&String>) = events.iter().partition(|e| e.starts_with('c'));
    if !c.is_empty() {
        let names: Vec<&str> = c.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "controllable {};", names.join(", "));
    }
    if !u.is_empty() {
        let names: Vec<&str> = u.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "uncontrollable {};", names.join(", "));
    }

    let n_plants = rng.gen_range(1..=opts.max_plants.max(1));
    let sizes: Vec<usize> = (0..n_plants).map(|_| rng.gen_range(2..=opts.max_locations.max(2))).collect();
    let mut alphabets: Vec<Vec<usize>> = vec![Vec::new(); n_plants];
    for e in 0..n_events {
        let p = rng.gen_range(0..n_plants);
        alphabets[p].push(e);
        if n_plants > 1 && rng.gen_bool(0.3) {
            let q = (p + rng.gen_range(1..n_plants)) % n_plants;
            alphabets[q].push(e);
        }
    }
    for a in &mut alphabets {
        if a.is_empty() {
            a.push(rng.gen_range(0..n_events));
        }
        a.sort_unstable();
    }
    let counter = rng.gen_bool(0.5);
    for p in 0..n_plants {
        let _ = writeln!(out, "\nplant automaton P{p}:");
        if p == 0 && counter {
            let _ = writeln!(out, "  disc int[0..{}] x = 0;", opts.counter_max);
        }
        let alpha: Vec<&str> = alphabets[p].iter().map(|&e| events[e].as_str()).collect();
        if !alpha.is_empty() {
            let _ = writeln!(out, "  alphabet {};", alpha.join(", "));
        }
        let mut marked = subset(rng, sizes[p], 0.4);
        if rng.gen_bool(0.8) && !marked.contains(&0) {
            marked.insert(0, 0);
        }
        if marked.is_empty() {
            marked.push(rng.gen_range(0..sizes[p]));
        }
        for l in 0..sizes[p] {
            let _ = writeln!(out, "  location L{l}:");
            let init = if l == 0 { " initial;" } else { "" };
            let mark = if marked.contains(&l) { " marked;" } else { "" };
            if !init.is_empty() || !mark.is_empty() {
                let _ = writeln!(out, "   {init}{mark}");
            }
            let forced = if alphabets[p].is_empty() { usize::MAX } else { rng.gen_range(0..alphabets[p].len()) };
            for (k, &e) in alphabets[p].iter().enumerate() {
                if k != forced && !rng.gen_bool(0.5) {
                    continue;
                }
                let target = if k == forced { (l + 1) % sizes[p] } else { rng.gen_range(0..sizes[p]) };
                let mut edge = format!("    edge {}", events[e]);
                if p == 0 && counter {
                    match rng.gen_range(0..4) {
                        0 => {
                            let _ = write!(edge, " when x < {} do x := x + 1", opts.counter_max);
                        }
                        1 => edge.push_str(" do x := 0"),
                        _ => {}
                    }
                } else if counter && rng.gen_bool(0.2) {
                    let _ = write!(edge, " when P0.x != {}", rng.gen_range(0..=opts.counter_max));
                } else if p > 0 && rng.gen_bool(0.15) {
                    let _ = write!(edge, " when not P{}.L{}", p - 1, rng.gen_range(0..sizes[p - 1]));
                }
                let _ = writeln!(edge, " goto L{target};");
                out.push_str(&edge);
            }
        }
        out.push_str("end\n");
    }

    if rng.gen_bool(0.5) {
        let mut alpha = subset(rng, n_events, 0.4);
        if alpha.is_empty() {
            alpha.push(rng.gen_range(0..n_events));
        }
        let monitor = rng.gen_bool(0.25);
        out.push_str("\nrequirement automaton R:\n");
        let names: Vec<&str> = alpha.iter().map(|&e| events[e].as_str()).collect();
        let _ = writeln!(out, "  alphabet {};", names.join(", "));
        if monitor {
            out.push_str("  monitor;\n");
        }
        for l in 0..2 {
            let _ = writeln!(out, "  location S{l}:");
            if l == 0 {
                out.push_str("    initial; marked;\n");
            }
            let back = rng.gen_range(0..alpha.len());
            for (k, &e) in alpha.iter().enumerate() {
                if l == 1 && k == back {
                    let _ = writeln!(out, "    edge {} goto S0;", events[e]);
                } else if rng.gen_bool(0.6) {
                    let _ = writeln!(out, "    edge {} goto S{};", events[e], rng.gen_range(0..2));
                }
            }
        }
        out.push_str("end\n");
    }
    let loc = |rng: &mut R| {
        let p = rng.gen_range(0..n_plants);
        format!("P{p}.L{}", rng.gen_range(1..sizes[p]))
    };
    for _ in 0..rng.gen_range(0..=2) {
        let e = &events[rng.gen_range(0..n_events)];
        let cond = loc(rng);
        let neg = if rng.gen_bool(0.5) { "not " } else { "" };
        let _ = writeln!(out, "requirement {e} needs {neg}{cond};");
    }
    if rng.gen_bool(0.4) {
        let (a, b) = (loc(rng), loc(rng));
        let _ = writeln!(out, "requirement not({a} and {b});");
    }
    if counter && rng.gen_bool(0.3) {
        let _ = writeln!(out, "requirement P0.x != {};", opts.counter_max);
    }
    if rng.gen_bool(0.2) {
        let (a, b) = (loc(rng), loc(rng));
        let _ = writeln!(out, "plant invariant {a} => not {b};");
    }
    out
}

/// A random feature tree of `n` features with cross-tree constraints.
pub fn random_feature_model<R: Rng>(rng: &mut R, n: usize) -> FeatureModel {
    let n = n.max(1);
    let names: Vec<String> = (0..n).map(|i| format!("F{i}")).collect();
    let mut constraints = vec![FeatureConstraint::new(RelationKind::Root, &names[0], &[])];
    let mut next = 1;
    let mut parent = 0;
    while next < n {
        let group = rng.gen_range(1..=3).min(n - next);
        let children: Vec<&str> = names[next..next + group].iter().map(|s| s.as_str()).collect();
        let kind = if group == 1 {
            *[RelationKind::Mandatory, RelationKind::Optional].choose(rng).unwrap_or(&RelationKind::Optional)
        } else {
            *[RelationKind::Alternative, RelationKind::Or].choose(rng).unwrap_or(&RelationKind::Or)
        };
        if group == 1 || matches!(kind, RelationKind::Alternative | RelationKind::Or) {
            constraints.push(FeatureConstraint::new(kind, &names[parent], &children));
        }
        next += group;
        parent = rng.gen_range(0..next);
    }
    for _ in 0..rng.gen_range(0..=2) {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(1..n);
        let mut b = rng.gen_range(1..n);
        if a == b {
            b = (b % (n - 1)) + 1;
        }
        if a == b {
            continue;
        }
        let kind = if rng.gen_bool(0.5) { RelationKind::Requires } else { RelationKind::Excludes };
        constraints.push(FeatureConstraint::new(kind, &names[a], &[&names[b]]));
    }
    FeatureModel {
        name: "Random".into(),
        features: names.into_iter().map(Feature::new).collect(),
        constraints,
        attributes: Vec::new(),
        attribute_constraints: Vec::new(),
    }
}
