//! Parser, printer and resolver over the example snippets and random inputs.

mod common;

use plsynth_core::lang::ast::{BinOp, Expr, UnOp};
use plsynth_core::lang::{parse_expr, parse_source, parse_sources, print_expr, print_spec, resolve, LangError, ResolveOptions};
use plsynth_core::random::{random_spec, RandomSpecOptions};
use plsynth_core::synthesis::{synthesize, Engine, SynthesisOptions};
use plsynth_core::Model;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn snippet(name: &str) -> String {
    let dir = format!("{}/tests/data/snippets", env!("CARGO_MANIFEST_DIR"));
    let file = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(Result::ok)
        .map(|e| e.path())
        .find(|p| p.file_stem().unwrap().to_string_lossy().ends_with(name))
        .unwrap_or_else(|| panic!("no snippet {name}"));
    std::fs::read_to_string(file).unwrap()
}

fn all_snippets() -> Vec<(String, String)> {
    let dir = format!("{}/tests/data/snippets", env!("CARGO_MANIFEST_DIR"));
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(Result::ok)
        .map(|e| {
            let p = e.path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

const FEATURES: &str = "plant def FEATURE():
  disc bool present in any;
  location: initial; marked;
end
F0: FEATURE(); F: FEATURE(); F1: FEATURE(); F2: FEATURE();
";

const ATTRIBUTED: &str = "controllable e;
plant def ATTR(alg int a):
  disc bool present in any;
  alg int A = if present : a else 0 end;
  location: initial; marked;
end
F1: ATTR(1); F2: ATTR(2);
alg int x = 2;
";

const POURED: &str = "plant automaton TeaPoured:
  monitor;
  location NotPoured:
    initial; marked;
    edge Tea.pour_tea goto Poured;
  location Poured:
    edge Machine.take_cup goto NotPoured;
end
plant automaton MilkPoured:
  monitor;
  location NotPoured:
    initial; marked;
    edge Coffee.pour_milk goto Poured;
  location Poured:
    edge Machine.take_cup goto NotPoured;
end
requirement Tea.pour_tea needs TeaPoured.NotPoured;
requirement Coffee.pour_milk needs MilkPoured.NotPoured;
";

const COFFEE_PLANT: &[&str] = &[
    "coffee/features_dynamic.fsc",
    "coffee/strict.fsc",
    "coffee/components.fsc",
    "coffee/link.fsc",
];

fn resolve_with(files: &[&str], parts: &[(&str, &str)]) -> Result<Model, LangError> {
    let owned = common::texts(files);
    let mut all: Vec<(&str, &str)> = owned.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    all.extend_from_slice(parts);
    resolve(&parse_sources(all)?, &ResolveOptions::default())
}

#[test]
fn every_snippet_parses_and_round_trips() {
    let snippets = all_snippets();
    assert_eq!(snippets.len(), 30);
    for (name, text) in &snippets {
        let spec = parse_source(name, text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!spec.declarations.is_empty(), "{name}");
        let printed = print_spec(&spec);
        let again = parse_source(name, &printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(again.declarations, spec.declarations, "{name}\n{printed}");
    }
}

#[test]
fn standalone_snippets_resolve() {
    for name in ["automaton", "feature_def", "attributed_ball", "coffee_features", "dynamic_feature_def", "swap"] {
        let text = snippet(name);
        resolve_with(&[], &[(name, &text)]).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn bare_int_gets_the_default_range_with_a_warning() {
    let text = snippet("automaton");
    let model = resolve_with(&[], &[("a", &text)]).unwrap();
    assert_eq!(model.warnings.len(), 1, "{:?}", model.warnings);
    assert!(model.warnings[0].contains('c'));
    let narrow = resolve(&parse_source("a", &text).unwrap(), &ResolveOptions { int_range: (0, 9) }).unwrap();
    assert_eq!(narrow.vars[0].ty.max(&narrow), 9);
}

#[test]
fn feature_snippets_resolve_in_context() {
    let formulas = snippet("constraint_formulas");
    let validity = snippet("validity");
    resolve_with(&[], &[("f", FEATURES), ("r", &formulas), ("v", &validity)]).unwrap();
    let conditions = snippet("event_feature_conditions");
    resolve_with(&[], &[("f", ATTRIBUTED), ("c", &conditions)]).unwrap();
    for name in ["validity_invariant", "coin_needs_change"] {
        let text = snippet(name);
        resolve_with(&["coffee/features_dynamic.fsc"], &[(name, &text)]).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let link = snippet("event_feature_link");
    resolve_with(&["coffee/features_dynamic.fsc", "coffee/components.fsc"], &[("link", &link)]).unwrap();
    let disable = snippet("req_disable_invalid");
    resolve_with(&["coffee/features_dynamic.fsc"], &[("e", "controllable e;"), ("d", &disable)]).unwrap();
}

#[test]
fn coffee_requirement_snippets_resolve_together() {
    let names = [
        "req_exclusive_choice",
        "req_choice_needs_idle",
        "req_ring_after_completion",
        "req_coin_presence",
        "req_coffee_poured",
        "req_pour_exclusive",
        "req_done_needs_poured",
        "req_pour_sugar_twice",
        "req_cancel",
        "req_take_cup",
    ];
    let texts: Vec<String> = names.iter().map(|n| snippet(n)).collect();
    let mut parts: Vec<(&str, &str)> = names.iter().zip(&texts).map(|(n, t)| (*n, t.as_str())).collect();
    parts.push(("poured", POURED));
    let model = resolve_with(COFFEE_PLANT, &parts).unwrap();
    let reference = common::load(common::COFFEE, &[]);
    assert_eq!(model.automata.len(), reference.automata.len());
    assert_eq!(model.requirements.len(), reference.requirements.len());
    let opts = SynthesisOptions { engine: Engine::Symbolic, ..Default::default() };
    let syn = synthesize(&model, &opts).unwrap();
    assert_eq!(syn.report.controlled_states, 6240u32.into());
}

#[test]
fn reconfiguration_and_supervisor_snippets_resolve_with_the_full_model() {
    for name in ["req_cancel_reconfig", "req_sugar_needs_feature", "supervisor"] {
        let text = snippet(name);
        resolve_with(common::COFFEE, &[(name, &text)]).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn body_comfort_snippets_resolve() {
    let parts: Vec<(String, String)> = ["bcs_features", "bcs_alarm", "bcs_presence", "bcs_requirements"]
        .iter()
        .map(|n| (n.to_string(), snippet(n)))
        .collect();
    let mut all: Vec<(&str, &str)> = parts.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let locking = common::read("bcs/locking.fsc");
    all.push(("locking", &locking));
    let model = resolve_with(&[], &all).unwrap();
    assert_eq!(model.vars.iter().filter(|v| v.name.ends_with(".present")).count(), 27);
}

#[test]
fn instances_are_hygienic() {
    let text = snippet("dynamic_feature_def") + "A: FEATURE(); B: FEATURE();\n";
    let model = resolve_with(&[], &[("f", &text)]).unwrap();
    let (a, b) = (model.automaton("A").unwrap(), model.automaton("B").unwrap());
    assert_ne!(a, b);
    assert_ne!(model.event("A.come"), model.event("B.come"));
    assert!(model.event("A.come").is_some() && model.event("come").is_none());
    let owners: Vec<usize> = model.vars.iter().map(|v| v.owner).collect();
    assert_eq!(owners, [a, b]);
    assert_eq!(model.automata[a].alphabet.len(), 2);
    assert!(model.automata[a].alphabet.iter().all(|e| !model.automata[b].alphabet.contains(e)));
}

#[test]
fn unknown_names_and_unsupported_constructs_are_rejected() {
    let err = resolve_with(&[], &[("x", "requirement Nope.go needs true;")]).unwrap_err();
    assert!(err.to_string().contains("Nope.go"), "{err}");
    let err = parse_source("x", "plant automaton A: location: initial; marked; edge e when f(1); end").unwrap_err();
    assert!(matches!(err, LangError::Unsupported { .. }), "{err}");
    assert!(matches!(resolve_with(&[], &[("x", "")]), Err(LangError::Empty)));
}

fn strip(e: &Expr) -> Expr {
    match e {
        Expr::Paren(x) => strip(x),
        Expr::Binary(op, a, b) => Expr::bin(*op, strip(a), strip(b)),
        Expr::If(c, t, f) => Expr::If(Box::new(strip(c)), Box::new(strip(t)), Box::new(strip(f))),
        Expr::Unary(UnOp::Neg, x) => match strip(x) {
            Expr::Int(n) => Expr::Int(-n),
            y => Expr::Unary(UnOp::Neg, Box::new(y)),
        },
        Expr::Unary(op, x) => Expr::Unary(*op, Box::new(strip(x))),
        other => other.clone(),
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Expr::Bool),
        (0i64..1000).prop_map(Expr::Int),
        prop::sample::select(vec!["x", "present", "A.L", "FM.present", "Coffee.Coffee"]).prop_map(Expr::name),
    ];
    let ops = vec![
        BinOp::Iff,
        BinOp::Implies,
        BinOp::Or,
        BinOp::And,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
    ];
    leaf.prop_recursive(5, 48, 3, move |inner| {
        prop_oneof![
            (prop::sample::select(ops.clone()), inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::bin(op, a, b)),
            inner.clone().prop_map(Expr::not),
            inner.clone().prop_map(|e| Expr::Unary(UnOp::Neg, Box::new(e))),
            (inner.clone(), inner.clone(), inner).prop_map(|(c, t, f)| Expr::If(Box::new(c), Box::new(t), Box::new(f))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_expressions_reparse_to_the_same_tree(e in arb_expr()) {
        let printed = print_expr(&e);
        let parsed = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(strip(&parsed), strip(&e), "{}", printed);
        let reprinted = print_expr(&parsed);
        prop_assert_eq!(parse_expr(&reprinted).unwrap(), parsed);
    }

    #[test]
    fn generated_models_round_trip(seed in any::<u64>()) {
        let text = random_spec(&mut ChaCha8Rng::seed_from_u64(seed), &RandomSpecOptions::default());
        let spec = parse_source("m", &text).unwrap();
        let printed = print_spec(&spec);
        let again = parse_source("m", &printed).unwrap();
        prop_assert_eq!(&again.declarations, &spec.declarations);
        prop_assert_eq!(print_spec(&again), printed);
    }
}
