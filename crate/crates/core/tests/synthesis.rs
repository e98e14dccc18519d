mod common;

use common::{load, COFFEE};
use plsynth_core::model::Expr;
use plsynth_core::symbolic::{EncodeOptions, SymbolicModel};
use plsynth_core::synthesis::{
    maximality_probe, normalize, synthesize, verify_controlled, Engine, RequirementClass, Supervisor, SynthesisError,
    SynthesisOptions,
};
use plsynth_core::Model;

fn options(engine: Engine) -> SynthesisOptions {
    SynthesisOptions {
        engine,
        ..Default::default()
    }
}

fn coffee_supervisor(model: &Model) -> (Supervisor, String) {
    let mut syn = synthesize(model, &options(Engine::Symbolic)).unwrap();
    let sup = syn.supervisor();
    let text = sup.to_fsc(model);
    (sup, text)
}

#[test]
fn coffee_controlled_space_matches_with_both_engines() {
    let model = load(COFFEE, &[]);
    for engine in [Engine::Explicit, Engine::Symbolic] {
        let syn = synthesize(&model, &options(engine)).unwrap();
        assert_eq!(syn.report.engine, engine);
        assert_eq!(syn.report.controlled_states, 6240u32.into());
        assert_eq!(syn.report.controlled_transitions, 35336u32.into());
        assert!(!syn.report.empty);
    }
}

#[test]
fn auto_engine_explores_coffee_explicitly() {
    let model = load(COFFEE, &[]);
    let syn = synthesize(&model, &options(Engine::Auto)).unwrap();
    assert_eq!(syn.report.engine, Engine::Explicit);
    assert_eq!(syn.report.uncontrolled_states, Some(82944));
}

#[test]
fn simple_guards_print_compactly() {
    let model = load(COFFEE, &[]);
    let (sup, _) = coffee_supervisor(&model);
    let guard = |name: &str| model.display(sup.guard(model.event(name).unwrap()).unwrap()).to_string();
    assert_eq!(guard("Coffee.pour_coffee"), "CoffeePoured.NotPoured");
    assert_eq!(guard("Coin.insert"), "true");
    assert_eq!(guard("Tea.pour_tea"), "TeaPoured.NotPoured");
    assert!(sup.guards.iter().all(|(e, _)| model.events[*e].controllable));
    assert_eq!(sup.guards.len(), model.controllable_events().count());
}

#[test]
fn coffee_guards_match_the_expected_supervisor() {
    let model = load(COFFEE, &[]);
    for engine in [Engine::Explicit, Engine::Symbolic] {
        let mut syn = synthesize(&model, &options(engine)).unwrap();
        assert_eq!(common::guard_mismatches(&mut syn, common::COFFEE_GUARDS), Vec::<String>::new());
        assert_eq!(common::guard_mismatches(&mut syn, common::COFFEE_CANCEL_GUARD), Vec::<String>::new());
    }
}

#[test]
fn a_wrong_expected_guard_is_detected() {
    let model = load(COFFEE, &[]);
    let mut syn = synthesize(&model, &options(Engine::Symbolic)).unwrap();
    let wrong = "Coffee.pour_milk\ttrue\nTea.tea\tCoinPresence.CoinPresent\n";
    assert_eq!(common::guard_mismatches(&mut syn, wrong), ["Coffee.pour_milk", "Tea.tea"]);
}

#[test]
fn supervisor_text_resolves_against_the_model() {
    let model = load(COFFEE, &[]);
    let (_, text) = coffee_supervisor(&model);
    assert!(text.starts_with("supervisor automaton sup:"));
    let controlled = load(COFFEE, &[("sup.fsc", &text)]);
    assert_eq!(controlled.automata.len(), model.automata.len() + 1);
}

#[test]
fn synthesized_coffee_supervisor_verifies() {
    let model = load(COFFEE, &[]);
    let (_, text) = coffee_supervisor(&model);
    let controlled = load(COFFEE, &[("sup.fsc", &text)]);
    let report = verify_controlled(&controlled, 1_000_000).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!((report.states, report.transitions), (6240, 35336));
}

#[test]
fn refusing_take_cup_breaks_nonblocking() {
    let model = load(COFFEE, &[]);
    let (_, text) = coffee_supervisor(&model);
    let mutated = text.replace("edge Machine.take_cup;", "edge Machine.take_cup when false;");
    assert_ne!(mutated, text);
    let controlled = load(COFFEE, &[("sup.fsc", &mutated)]);
    let report = verify_controlled(&controlled, 1_000_000).unwrap();
    assert!(!report.passed());
    assert!(report.safety.is_empty());
    let c = &report.nonblocking[0];
    assert_eq!(c.property, "nonblocking");
    assert!(!c.trace.is_empty(), "{c}");
}

#[test]
fn coffee_supervisor_is_maximally_permissive() {
    let model = load(COFFEE, &[]);
    let (_, text) = coffee_supervisor(&model);
    let controlled = load(COFFEE, &[("sup.fsc", &text)]);
    let probe = maximality_probe(&controlled, 1_000_000, usize::MAX, 0).unwrap();
    assert!(probe.removed > 0);
    assert_eq!(probe.checked, probe.removed);
    assert!(!probe.partial);
    assert!(probe.passed(), "{:?}", probe.readdable);
}

#[test]
fn spurious_conjunct_is_found_by_the_probe() {
    let model = load(COFFEE, &[]);
    let (_, text) = coffee_supervisor(&model);
    let mutated = text.replace(
        "edge Coffee.pour_milk when MilkPoured.NotPoured;",
        "edge Coffee.pour_milk when MilkPoured.NotPoured and not Sweet.Sugar;",
    );
    assert_ne!(mutated, text);
    let controlled = load(COFFEE, &[("sup.fsc", &mutated)]);
    let probe = maximality_probe(&controlled, 1_000_000, usize::MAX, 0).unwrap();
    assert!(!probe.passed());
    assert!(probe.readdable[0].detail.contains("Coffee.pour_milk"), "{}", probe.readdable[0]);
}

#[test]
fn sampled_probe_is_flagged_partial_and_reproducible() {
    let model = load(COFFEE, &[]);
    let (_, text) = coffee_supervisor(&model);
    let controlled = load(COFFEE, &[("sup.fsc", &text)]);
    let a = maximality_probe(&controlled, 1_000_000, 100, 7).unwrap();
    let b = maximality_probe(&controlled, 1_000_000, 100, 7).unwrap();
    assert!(a.partial);
    assert_eq!(a.checked, 100);
    assert_eq!((a.removed, a.readdable.len()), (b.removed, b.readdable.len()));
}

const PLANT: &str = "
controllable a, b;
uncontrollable u;
plant automaton P:
  location X:
    initial; marked;
    edge a goto Y;
  location Y:
    marked;
    edge b goto X;
    edge u goto Y;
end
";

#[test]
fn unrestricted_plant_gets_true_guards() {
    let model = common::from_texts(&[("p.fsc", PLANT)]);
    let mut syn = synthesize(&model, &options(Engine::Symbolic)).unwrap();
    assert_eq!(syn.report.controlled_states, 2u32.into());
    assert_eq!(syn.report.good_states, 2u32.into());
    let sup = syn.supervisor();
    assert!(sup.guards.iter().all(|(_, g)| *g == Expr::Bool(true)));
    assert_eq!(sup.initial, Expr::Bool(true));
    let text = sup.to_fsc(&model);
    let controlled = common::from_texts(&[("p.fsc", PLANT), ("sup.fsc", &text)]);
    let probe = maximality_probe(&controlled, 1000, 1000, 0).unwrap();
    assert_eq!(probe.removed, 0);
    assert!(probe.passed());
}

#[test]
fn empty_requirement_set_is_trivially_safe() {
    let model = common::from_texts(&[("p.fsc", PLANT)]);
    let report = verify_controlled(&model, 1000).unwrap();
    assert!(report.passed());
    assert_eq!(report.states, 2);
}

#[test]
fn contradictory_invariant_gives_an_empty_supervisor() {
    let text = format!("{PLANT}\nrequirement false;\n");
    let model = common::from_texts(&[("p.fsc", &text)]);
    for engine in [Engine::Explicit, Engine::Symbolic] {
        match synthesize(&model, &options(engine)) {
            Err(SynthesisError::Empty(report)) => {
                assert!(report.empty);
                assert_eq!(report.controlled_states, 0u32.into());
            }
            other => panic!("expected an empty supervisor, got {:?}", other.map(|s| s.report)),
        }
    }
}

#[test]
fn uncontrollable_escape_removes_its_source() {
    let text = format!("{PLANT}\nrequirement u needs false;\n");
    let model = common::from_texts(&[("p.fsc", &text)]);
    let mut syn = synthesize(&model, &options(Engine::Explicit)).unwrap();
    assert_eq!(syn.report.controlled_states, 1u32.into());
    let sup = syn.supervisor();
    assert_eq!(model.display(sup.guard(model.event("a").unwrap()).unwrap()).to_string(), "false");
}

#[test]
fn requirements_are_classified() {
    let model = load(
        COFFEE,
        &[("extra.fsc", "requirement Sweet.Sugar => FS.present;\nrequirement FT.go needs not Tea.Tea;\n")],
    );
    let mut sm = SymbolicModel::encode(&model, &EncodeOptions::default()).unwrap();
    let problem = normalize(&model, &mut sm).unwrap();
    assert_eq!(problem.requirements[0].0, RequirementClass::Invariant);
    let coffee = model.event("Coffee.coffee").unwrap();
    assert!(problem
        .requirements
        .iter()
        .any(|(c, _)| *c == RequirementClass::GuardConjunct { event: coffee }));
    let go = model.event("FT.go").unwrap();
    assert_eq!(
        problem.requirements.last().map(|r| r.0.clone()),
        Some(RequirementClass::BadStateCondition { event: go })
    );
    let base = load(COFFEE, &[]);
    let mut bsm = SymbolicModel::encode(&base, &EncodeOptions::default()).unwrap();
    let before = normalize(&base, &mut bsm).unwrap();
    let invariants = |p: &plsynth_core::synthesis::ControlProblem<'_>| p.count(|c| *c == RequirementClass::Invariant);
    assert_eq!(invariants(&problem), invariants(&before) + 1);
    let ring = model.automaton("RingAfterBeverageCompletion").unwrap();
    assert!(problem.requirement_automata.contains(&ring));
}

#[test]
fn nondeterministic_requirement_automaton_is_rejected() {
    let text = format!(
        "{PLANT}
requirement automaton R:
  location S:
    initial; marked;
    edge a goto T;
    edge a goto S;
  location T:
    marked;
    edge b goto S;
end
"
    );
    let model = common::from_texts(&[("p.fsc", &text)]);
    match synthesize(&model, &options(Engine::Symbolic)) {
        Err(SynthesisError::Nondeterministic { automaton, event, .. }) => {
            assert_eq!((automaton.as_str(), event.as_str()), ("R", "a"));
        }
        other => panic!("expected rejection, got {:?}", other.map(|s| s.report)),
    }
}
