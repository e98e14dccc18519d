//! Feature-model semantics against brute force.

mod common;

use plsynth_core::feature::{count_by_enumeration, count_configurations, count_valid_configurations, FeatureModel};
use plsynth_core::lang::ast::RelationKind;
use plsynth_core::random::random_feature_model;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Whether the assignment `bits` (feature `i` present iff bit `i`) satisfies every constraint.
fn valid(fm: &FeatureModel, bits: u32) -> bool {
    let idx = |n: &str| fm.features.iter().position(|f| f.name == n).unwrap();
    let on = |n: &str| bits >> idx(n) & 1 == 1;
    fm.constraints.iter().all(|c| {
        let p = on(&c.parent);
        let kids = c.children.iter().filter(|k| on(k)).count();
        match c.kind {
            RelationKind::Root => p,
            RelationKind::Mandatory => p == on(&c.children[0]),
            RelationKind::Optional => !on(&c.children[0]) || p,
            RelationKind::Requires => !p || on(&c.children[0]),
            RelationKind::Excludes => !(p && on(&c.children[0])),
            RelationKind::Or => p == (kids > 0),
            RelationKind::Alternative => if p { kids == 1 } else { kids == 0 },
        }
    })
}

fn brute_force(fm: &FeatureModel) -> (u64, Vec<String>) {
    let n = fm.features.len();
    let mut count = 0;
    let mut seen = 0u32;
    for bits in 0..1u32 << n {
        if valid(fm, bits) {
            count += 1;
            seen |= bits;
        }
    }
    let dead = (0..n).filter(|i| seen >> i & 1 == 0).map(|i| fm.features[i].name.clone()).collect();
    (count, dead)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn symbolic_count_matches_brute_force(seed in any::<u64>(), n in 1usize..=20) {
        let fm = random_feature_model(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let (expected, dead) = brute_force(&fm);
        let got = count_valid_configurations(&fm).unwrap();
        prop_assert_eq!(got.total, expected.into());
        let mut got_dead = got.dead.clone();
        got_dead.sort();
        let mut want_dead = dead;
        want_dead.sort();
        prop_assert_eq!(got_dead, want_dead);
    }
}

#[test]
fn enumeration_agrees_on_small_models() {
    for seed in 0..40 {
        let fm = random_feature_model(&mut ChaCha8Rng::seed_from_u64(seed), 2 + seed as usize % 11);
        let text = plsynth_core::lang::printer::print_spec(&{
            let mut spec = plsynth_core::lang::SourceSpec::default();
            let decls = plsynth_core::feature::compile_feature_model(
                &fm,
                &plsynth_core::feature::ReconfigMode::fixed(),
                &plsynth_core::feature::Strictness::Strict,
            )
            .unwrap();
            for d in decls {
                spec.push(d, Default::default());
            }
            spec
        });
        let model = common::from_texts(&[("fm.fsc", &text)]);
        assert_eq!(count_by_enumeration(&model).unwrap(), brute_force(&fm).0, "seed {seed}");
    }
}

#[test]
fn single_relations_have_their_textbook_counts() {
    use plsynth_core::feature::{Feature, FeatureConstraint};
    let fm = |kind, k: usize| {
        let kids: Vec<String> = (1..=k).map(|i| format!("C{i}")).collect();
        let refs: Vec<&str> = kids.iter().map(|s| s.as_str()).collect();
        FeatureModel {
            name: "M".into(),
            features: std::iter::once("P".to_string()).chain(kids.clone()).map(Feature::new).collect(),
            constraints: vec![
                FeatureConstraint::new(RelationKind::Root, "P", &[]),
                FeatureConstraint::new(kind, "P", &refs),
            ],
            attributes: Vec::new(),
            attribute_constraints: Vec::new(),
        }
    };
    let count = |m: FeatureModel| count_valid_configurations(&m).unwrap().total;
    assert_eq!(count(fm(RelationKind::Alternative, 3)), 3u32.into());
    assert_eq!(count(fm(RelationKind::Or, 3)), 7u32.into());
    assert_eq!(count(fm(RelationKind::Mandatory, 1)), 1u32.into());
    assert_eq!(count(fm(RelationKind::Optional, 1)), 2u32.into());
}

#[test]
fn coffee_configurations() {
    let count = |files: &[&str]| count_configurations(&common::load(files, &[])).unwrap().total;
    assert_eq!(count(&["coffee/features_static.fsc"]), 16u32.into());
    assert_eq!(count(&["coffee/features_static_nocost.fsc"]), 20u32.into());
    assert_eq!(count(&["coffee/featuremodel.fsc"]), 16u32.into());
    assert_eq!(count(&["coffee/features_dynamic.fsc", "coffee/strict.fsc"]), 16u32.into());
}

#[test]
fn bcs_configurations() {
    let count = |file: &str| count_configurations(&common::load(&[file], &[])).unwrap().total;
    assert_eq!(count("bcs/features_static.fsc"), 11616u32.into());
    assert_eq!(count("bcs/features_dynamic.fsc"), 11616u32.into());
}
