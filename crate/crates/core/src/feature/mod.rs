//! Feature models and their compilation into feature automata.

mod constraints;
mod count;
mod lower;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::lang::ast::{self, FeatureModelDecl, ModeDecl, RelationKind, StrictnessDecl};
use crate::lang::error::ResolveKind;

pub use constraints::constraint_formula;
pub use count::{
    count_by_enumeration, count_configurations, count_valid_configurations, ConfigCount, CountError,
};
pub use lower::{compile_feature, compile_feature_model, compile_swap, lower_decl};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("{0}")]
    Arity(String),
    #[error("{0}")]
    Structure(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("unsupported aggregate `{0}`")]
    UnsupportedAggregate(String),
}

impl FeatureError {
    pub fn kind(&self) -> ResolveKind {
        match self {
            FeatureError::UnknownFeature(_) => ResolveKind::UnknownName,
            FeatureError::Arity(_) => ResolveKind::Arity,
            FeatureError::Structure(_) => ResolveKind::Structure,
            FeatureError::Duplicate(_) => ResolveKind::Duplicate,
            FeatureError::UnsupportedAggregate(_) => ResolveKind::Unsupported,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    /// Attribute values carried by this feature, by attribute name.
    pub attributes: Vec<(String, i64)>,
}

impl Feature {
    pub fn new(name: impl Into<String>) -> Feature {
        Feature {
            name: name.into(),
            attributes: Vec::new(),
        }
    }

    pub fn with(mut self, attribute: &str, value: i64) -> Feature {
        self.attributes.push((attribute.to_string(), value));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureConstraint {
    pub kind: RelationKind,
    /// The constrained parent, or the left-hand feature of requires/excludes.
    pub parent: String,
    pub children: Vec<String>,
}

impl FeatureConstraint {
    pub fn new(kind: RelationKind, parent: &str, children: &[&str]) -> FeatureConstraint {
        FeatureConstraint {
            kind,
            parent: parent.to_string(),
            children: children.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aggregate {
    Sum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub aggregate: Aggregate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureModel {
    pub name: String,
    pub features: Vec<Feature>,
    pub constraints: Vec<FeatureConstraint>,
    pub attributes: Vec<AttributeSpec>,
    /// Named boolean constraints over attribute aggregates, e.g. `cost_valid`.
    pub attribute_constraints: Vec<(String, ast::Expr)>,
}

/// How each feature may change at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reconfig {
    Static,
    Dynamic { controllable: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapGroup {
    pub event: String,
    pub controllable: bool,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconfigMode {
    pub default: Reconfig,
    pub per_feature: HashMap<String, Reconfig>,
    pub swaps: Vec<SwapGroup>,
}

impl ReconfigMode {
    pub fn fixed() -> ReconfigMode {
        ReconfigMode {
            default: Reconfig::Static,
            per_feature: HashMap::new(),
            swaps: Vec::new(),
        }
    }

    pub fn single(controllable: bool) -> ReconfigMode {
        ReconfigMode {
            default: Reconfig::Dynamic { controllable },
            ..ReconfigMode::fixed()
        }
    }

    pub fn of(&self, feature: &str) -> Reconfig {
        self.per_feature
            .get(feature)
            .copied()
            .unwrap_or(self.default)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strictness {
    Strict,
    Relaxed(Vec<ast::Expr>),
}

impl FeatureModel {
    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.features.iter().find(|f| f.name == name)
    }

    pub fn root(&self) -> Option<&str> {
        self.constraints
            .iter()
            .find(|c| c.kind == RelationKind::Root)
            .map(|c| c.parent.as_str())
    }

    /// Checks the structural invariants: known participants, arities, one root, a tree.
    pub fn validate(&self) -> Result<(), FeatureError> {
        let mut names = HashSet::new();
        for f in &self.features {
            if !names.insert(f.name.as_str()) {
                return Err(FeatureError::Duplicate(format!("feature `{}`", f.name)));
            }
            let mut attrs = HashSet::new();
            for (a, _) in &f.attributes {
                if !attrs.insert(a.as_str()) {
                    return Err(FeatureError::Duplicate(format!("attribute `{a}` of `{}`", f.name)));
                }
                if !self.attributes.iter().any(|s| &s.name == a) {
                    return Err(FeatureError::Structure(format!(
                        "attribute `{a}` of `{}` is not declared",
                        f.name
                    )));
                }
            }
        }
        let mut roots = 0;
        let mut parent_of: HashMap<&str, &str> = HashMap::new();
        for c in &self.constraints {
            for n in std::iter::once(&c.parent).chain(&c.children) {
                if !names.contains(n.as_str()) {
                    return Err(FeatureError::UnknownFeature(n.clone()));
                }
            }
            let arity_ok = match c.kind {
                RelationKind::Root => c.children.is_empty(),
                RelationKind::Mandatory
                | RelationKind::Optional
                | RelationKind::Requires
                | RelationKind::Excludes => c.children.len() == 1,
                RelationKind::Alternative | RelationKind::Or => !c.children.is_empty(),
            };
            if !arity_ok {
                return Err(FeatureError::Arity(format!(
                    "`{}` constraint on `{}` has {} child feature(s)",
                    c.kind.word(),
                    c.parent,
                    c.children.len()
                )));
            }
            match c.kind {
                RelationKind::Root => roots += 1,
                RelationKind::Requires | RelationKind::Excludes => {}
                _ => {
                    for ch in &c.children {
                        if let Some(old) = parent_of.insert(ch, &c.parent) {
                            if old != c.parent {
                                return Err(FeatureError::Structure(format!(
                                    "feature `{ch}` has two parents, `{old}` and `{}`",
                                    c.parent
                                )));
                            }
                        }
                    }
                }
            }
        }
        if roots != 1 {
            return Err(FeatureError::Structure(format!(
                "a feature model needs exactly one root, found {roots}"
            )));
        }
        let root = self.root().unwrap_or_default();
        if parent_of.contains_key(root) {
            return Err(FeatureError::Structure(format!("root `{root}` has a parent")));
        }
        for f in &self.features {
            let mut seen = HashSet::new();
            let mut cur = f.name.as_str();
            while let Some(p) = parent_of.get(cur) {
                if !seen.insert(cur) {
                    return Err(FeatureError::Structure(format!(
                        "feature hierarchy has a cycle through `{cur}`"
                    )));
                }
                cur = p;
            }
        }
        Ok(())
    }

    /// Builds the domain model from a compact `featuremodel` block.
    pub fn from_decl(
        decl: &FeatureModelDecl,
    ) -> Result<(FeatureModel, ReconfigMode, Strictness), FeatureError> {
        let mut features: Vec<Feature> = decl.features.iter().map(Feature::new).collect();
        let mut attributes = Vec::new();
        for a in &decl.attributes {
            let aggregate = match a.aggregate.as_deref() {
                Some("sum") => Aggregate::Sum,
                Some(other) => return Err(FeatureError::UnsupportedAggregate(other.to_string())),
                None => return Err(FeatureError::UnsupportedAggregate("(none)".to_string())),
            };
            if attributes.iter().any(|s: &AttributeSpec| s.name == a.name) {
                return Err(FeatureError::Duplicate(format!("attribute `{}`", a.name)));
            }
            attributes.push(AttributeSpec {
                name: a.name.clone(),
                aggregate,
            });
            for (f, v) in &a.values {
                let feat = features
                    .iter_mut()
                    .find(|x| &x.name == f)
                    .ok_or_else(|| FeatureError::UnknownFeature(f.clone()))?;
                feat.attributes.push((a.name.clone(), *v));
            }
        }
        let mut constraints = Vec::new();
        for r in &decl.relations {
            match r.kind {
                RelationKind::Alternative | RelationKind::Or | RelationKind::Root => {
                    constraints.push(FeatureConstraint {
                        kind: r.kind,
                        parent: r.parent.clone(),
                        children: r.children.clone(),
                    })
                }
                _ => {
                    if r.children.is_empty() {
                        return Err(FeatureError::Arity(format!(
                            "`{}` constraint on `{}` names no feature",
                            r.kind.word(),
                            r.parent
                        )));
                    }
                    for c in &r.children {
                        constraints.push(FeatureConstraint {
                            kind: r.kind,
                            parent: r.parent.clone(),
                            children: vec![c.clone()],
                        });
                    }
                }
            }
        }
        let fm = FeatureModel {
            name: decl.name.clone(),
            features,
            constraints,
            attributes,
            attribute_constraints: decl.constraints.clone(),
        };
        fm.validate()?;

        let mut mode = ReconfigMode::fixed();
        for m in &decl.modes {
            let (reconfig, list) = match m {
                ModeDecl::Static => (Reconfig::Static, &[][..]),
                ModeDecl::Dynamic {
                    controllable,
                    features,
                } => (
                    Reconfig::Dynamic {
                        controllable: *controllable,
                    },
                    features.as_slice(),
                ),
            };
            if list.is_empty() {
                mode.default = reconfig;
            }
            for f in list {
                if fm.feature(f).is_none() {
                    return Err(FeatureError::UnknownFeature(f.clone()));
                }
                mode.per_feature.insert(f.clone(), reconfig);
            }
        }
        for s in &decl.swaps {
            mode.swaps.push(SwapGroup {
                event: s.event.clone(),
                controllable: s.controllable,
                members: s.members.clone(),
            });
        }
        let strictness = match decl.strictness {
            Some(StrictnessDecl::Relaxed) => Strictness::Relaxed(decl.invariants.clone()),
            Some(StrictnessDecl::Strict) | None => {
                if !decl.invariants.is_empty() {
                    return Err(FeatureError::Structure(
                        "extra invariants need `relaxed;`".to_string(),
                    ));
                }
                Strictness::Strict
            }
        };
        Ok((fm, mode, strictness))
    }
}
