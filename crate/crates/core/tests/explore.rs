//! Explicit composition and exploration.

mod common;

use std::collections::{BTreeSet, HashMap};

use plsynth_core::efa::{explore, Composition, EfaError, ExploreOptions, ExploreStats, TransitionSystem};
use plsynth_core::lang::ast::Declaration;
use plsynth_core::lang::{parse_source, print_spec, SourceSpec};
use plsynth_core::model::Kind;
use plsynth_core::Model;

fn run(model: &Model) -> (TransitionSystem, ExploreStats) {
    let ts = explore(&Composition::new(model), &ExploreOptions::default()).unwrap();
    let stats = ExploreStats::of(&ts, model);
    (ts, stats)
}

#[test]
fn coffee_components_alone() {
    let model = common::load(&["coffee/components.fsc"], &[]);
    assert_eq!(model.automata.len(), 7);
    let (_, stats) = run(&model);
    assert_eq!((stats.states, stats.transitions), (18, 207));
}

#[test]
fn strict_dynamic_feature_model() {
    let model = common::load(&["coffee/features_dynamic.fsc", "coffee/strict.fsc"], &[]);
    let (ts, stats) = run(&model);
    assert_eq!((stats.states, stats.transitions, stats.initial), (16, 42, 16));
    assert_eq!(stats.components, [7, 9]);
    let sys_valid = model.algs.iter().position(|a| a.name == "sys_valid").unwrap();
    let sys_valid = plsynth_core::model::Expr::Alg(sys_valid);
    for s in &ts.states {
        assert!(model.holds(&sys_valid, s).unwrap());
    }
}

#[test]
fn relaxed_dynamic_feature_model() {
    let model = common::load(&["coffee/features_dynamic.fsc", "coffee/relaxed.fsc"], &[]);
    let (_, stats) = run(&model);
    assert_eq!((stats.states, stats.initial), (1364, 16));
    assert_eq!(stats.reconfigurations(), 13440);
    assert_eq!(stats.transitions, 13440);
}

#[test]
fn full_coffee_model_properties() {
    let model = common::load(common::COFFEE, &[]);
    let comp = Composition::new(&model);
    let ts = explore(&comp, &ExploreOptions::default()).unwrap();
    assert_eq!(ts.len(), 82944);
    for (i, s) in ts.states.iter().enumerate() {
        assert!(comp.legal(s).unwrap());
        for inv in &model.plant_invariants {
            assert!(model.holds(inv, s).unwrap());
        }
        let all_marked = model.automata.iter().enumerate().all(|(a, aut)| aut.locations[s[a] as usize].marked);
        assert_eq!(ts.marked[i], all_marked);
    }
    for t in ts.transitions.iter().step_by(7) {
        let s = &ts.states[t.source as usize];
        let target = &ts.states[t.target as usize];
        let en = comp.enabled(s, t.event).unwrap();
        let hit = en.choices().iter().any(|c| comp.step(s, t.event, c).unwrap() == target.to_vec());
        assert!(hit, "{} --{}-->", model.describe_state(s), model.events[t.event].name);
    }
}

fn monitors_of(file: &str) -> String {
    let spec = parse_source(file, &common::read(file)).unwrap();
    let mut out = SourceSpec::default();
    for (d, span) in spec.declarations.iter().zip(&spec.spans) {
        if let Declaration::Automaton { body, .. } = d {
            if body.monitor.is_some() {
                out.push(d.clone(), *span);
            }
        }
    }
    print_spec(&out)
}

#[test]
fn monitors_never_restrict() {
    let monitors = monitors_of("coffee/requirements.fsc");
    let base = common::load(&["coffee/components.fsc"], &[]);
    let watched = common::load(&["coffee/components.fsc"], &[("monitors.fsc", &monitors)]);
    assert!(watched.automata.len() > base.automata.len());
    let enabled_by_state = |model: &Model| -> HashMap<Vec<i32>, BTreeSet<String>> {
        let keep: Vec<usize> = model
            .automata
            .iter()
            .enumerate()
            .filter(|(_, a)| base.automaton(&a.name).is_some())
            .map(|(i, _)| i)
            .collect();
        let (ts, _) = run(model);
        let mut out: HashMap<Vec<i32>, BTreeSet<String>> = HashMap::new();
        for s in &ts.states {
            out.entry(keep.iter().map(|&a| s[a]).collect()).or_default();
        }
        for t in &ts.transitions {
            let s = &ts.states[t.source as usize];
            let key: Vec<i32> = keep.iter().map(|&a| s[a]).collect();
            out.entry(key).or_default().insert(model.events[t.event].name.clone());
        }
        out
    };
    let plain = enabled_by_state(&base);
    let monitored = enabled_by_state(&watched);
    assert_eq!(plain, monitored);
    assert!(watched.automata.iter().filter(|a| a.kind == Kind::Plant).count() > 7);
}

#[test]
fn explicit_budget_and_domain_errors() {
    let model = common::load(common::COFFEE, &[]);
    let opts = ExploreOptions {
        budget: 1000,
        ..Default::default()
    };
    let err = explore(&Composition::new(&model), &opts).unwrap_err();
    assert_eq!(err, EfaError::Budget { limit: 1000 });
    let text = "controllable up;
plant automaton P:
  disc int[0..2] x = 0;
  location: initial; marked;
    edge up do x := x + 1;
end";
    let model = common::from_texts(&[("p.fsc", text)]);
    let err = explore(&Composition::new(&model), &ExploreOptions::default()).unwrap_err();
    assert!(matches!(err, EfaError::OutOfRange { value: 3, .. }), "{err}");
}

#[test]
fn monitor_stays_put_without_an_edge() {
    let text = "controllable a, b;
plant automaton P:
  location X: initial; marked;
    edge a, b;
end
plant automaton M:
  monitor;
  alphabet a, b;
  location Q0: initial; marked;
    edge a goto Q1;
  location Q1;
end";
    let model = common::from_texts(&[("p.fsc", text)]);
    let (_, stats) = run(&model);
    assert_eq!((stats.states, stats.transitions, stats.marked), (2, 4, 1));
}
