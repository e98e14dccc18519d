use num_bigint::BigUint;
use thiserror::Error;

use super::{compile_feature_model, FeatureError, FeatureModel, ReconfigMode, Strictness};
use crate::lang::ast::SourceSpec;
use crate::lang::resolve::{resolve, ResolveOptions};
use crate::lang::LangError;
use crate::model::{Model, Type, VarId, VarInit};
use crate::symbolic::{EncodeOptions, SymbolicError, SymbolicModel};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("no validity predicate found: the model has no `present` variables")]
    NoValidity,
    #[error("{0} features are too many to enumerate")]
    TooLarge(usize),
    #[error("variable `{0}` has no fixed initial value")]
    Unconstrained(String),
}

/// Number of valid configurations, with the features that appear in none of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigCount {
    pub total: BigUint,
    pub features: Vec<String>,
    pub dead: Vec<String>,
}

fn present_vars(model: &Model) -> Vec<VarId> {
    model
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.ty == Type::Bool && v.name.ends_with(".present"))
        .map(|(i, _)| i)
        .collect()
}

fn feature_name(model: &Model, v: VarId) -> String {
    model.automata[model.vars[v].owner].name.clone()
}

/// Counts assignments to the `present` variables that admit an initial state.
pub fn count_configurations(model: &Model) -> Result<ConfigCount, CountError> {
    let present = present_vars(model);
    if present.is_empty() {
        return Err(CountError::NoValidity);
    }
    let mut sm = SymbolicModel::encode(model, &EncodeOptions::default())?;
    let slots: Vec<usize> = present.iter().filter_map(|&v| sm.var_slot[v]).collect();
    let keep = sm.slot_vars(&slots);
    let hidden: Vec<u32> = sm.cur_vars().into_iter().filter(|b| !keep.contains(b)).collect();
    let cube = sm.store.cube(&hidden);
    let configs = sm.store.exists(sm.initial, cube);
    let total = sm.store.sat_count(configs, &keep);
    let mut dead = Vec::new();
    for &v in &present {
        let on = sm.var_is(v, 1, false);
        if sm.store.and(configs, on) == crate::symbolic::FALSE {
            dead.push(feature_name(model, v));
        }
    }
    Ok(ConfigCount {
        total,
        features: present.iter().map(|&v| feature_name(model, v)).collect(),
        dead,
    })
}

/// Lowers `fm` with static features and counts its valid configurations.
pub fn count_valid_configurations(fm: &FeatureModel) -> Result<ConfigCount, CountError> {
    let model = static_model(fm)?;
    count_configurations(&model)
}

fn static_model(fm: &FeatureModel) -> Result<Model, CountError> {
    let decls = compile_feature_model(fm, &ReconfigMode::fixed(), &Strictness::Strict)?;
    let mut spec = SourceSpec::default();
    for d in decls {
        spec.push(d, Default::default());
    }
    Ok(resolve(&spec, &ResolveOptions::default())?)
}

/// Brute-force count over every assignment of the `present` variables.
///
/// Other variables take their initial value and every automaton its first location.
pub fn count_by_enumeration(model: &Model) -> Result<u64, CountError> {
    let present = present_vars(model);
    if present.is_empty() {
        return Err(CountError::NoValidity);
    }
    if present.len() > 20 {
        return Err(CountError::TooLarge(present.len()));
    }
    let mut state = vec![0i32; model.state_len()];
    for (v, var) in model.vars.iter().enumerate() {
        if present.contains(&v) {
            continue;
        }
        match var.init {
            VarInit::Value(x) => state[model.var_slot(v)] = x as i32,
            VarInit::Any => return Err(CountError::Unconstrained(var.name.clone())),
        }
    }
    let mut count = 0;
    for bits in 0u64..1 << present.len() {
        for (i, &v) in present.iter().enumerate() {
            state[model.var_slot(v)] = ((bits >> i) & 1) as i32;
        }
        let initial_ok = model.automata.iter().all(|a| match &a.locations[0].initial {
            Some(p) => model.holds(p, &state).unwrap_or(false),
            None => false,
        });
        let inv_ok = model
            .plant_invariants
            .iter()
            .all(|p| model.holds(p, &state).unwrap_or(false));
        if initial_ok && inv_ok {
            count += 1;
        }
    }
    Ok(count)
}
