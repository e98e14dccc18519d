use std::collections::HashSet;

use crate::lang::ast::{
    AlgDecl, AutomatonBody, AutomatonKind, BinOp, Declaration, DiscDecl, DiscInit, EdgeDecl,
    EventGroup, Expr, FeatureModelDecl, LocationDecl, Param, Path, TypeExpr, UnOp,
};

use super::{
    constraint_formula, Feature, FeatureError, FeatureModel, Reconfig, ReconfigMode, Strictness,
    SwapGroup,
};

fn present() -> Expr {
    Expr::name("present")
}

fn assign_present(value: Expr) -> Vec<(String, Expr)> {
    vec![("present".to_string(), value)]
}

fn edge(event: &str, guard: Option<Expr>, updates: Vec<(String, Expr)>) -> EdgeDecl {
    EdgeDecl {
        events: vec![Path::single(event)],
        guard,
        updates,
        target: None,
        span: Default::default(),
    }
}

fn single_location(initial: Option<Expr>, edges: Vec<EdgeDecl>) -> LocationDecl {
    LocationDecl {
        name: None,
        initial: Some(initial),
        marked: true,
        edges,
        span: Default::default(),
    }
}

/// Body of a feature automaton; `attributes` pairs each attribute with its value expression.
fn feature_body(attributes: &[(String, Expr)], reconfig: Reconfig) -> AutomatonBody {
    let mut body = AutomatonBody {
        discs: vec![DiscDecl {
            ty: TypeExpr::Bool,
            name: "present".to_string(),
            init: DiscInit::Any,
        }],
        ..Default::default()
    };
    for (name, value) in attributes {
        body.algs.push(AlgDecl {
            ty: TypeExpr::Int(None),
            name: name.clone(),
            value: Expr::If(
                Box::new(present()),
                Box::new(value.clone()),
                Box::new(Expr::Int(0)),
            ),
        });
    }
    let mut edges = Vec::new();
    if let Reconfig::Dynamic { controllable } = reconfig {
        body.events.push(EventGroup {
            controllable,
            names: vec!["come".to_string(), "go".to_string()],
        });
        edges.push(edge(
            "come",
            Some(Expr::Unary(UnOp::Not, Box::new(present()))),
            assign_present(Expr::Bool(true)),
        ));
        edges.push(edge("go", Some(present()), assign_present(Expr::Bool(false))));
    }
    body.locations.push(single_location(None, edges));
    body
}

/// A stand-alone plant automaton for one feature, attribute values inlined.
pub fn compile_feature(f: &Feature, reconfig: Reconfig) -> Declaration {
    let attrs: Vec<(String, Expr)> = f
        .attributes
        .iter()
        .map(|(a, v)| (a.clone(), Expr::Int(*v)))
        .collect();
    Declaration::Automaton {
        kind: AutomatonKind::Plant,
        name: f.name.clone(),
        body: feature_body(&attrs, reconfig),
    }
}

/// The self-loop every member of a swap group gains: it flips `present`.
pub fn compile_swap(group: &SwapGroup) -> Result<EdgeDecl, FeatureError> {
    if group.members.len() < 2 {
        return Err(FeatureError::Arity(format!(
            "swap `{}` needs at least two features, got {}",
            group.event,
            group.members.len()
        )));
    }
    Ok(edge(
        &group.event,
        None,
        assign_present(Expr::Unary(
            UnOp::Not,
            Box::new(Expr::paren(present())),
        )),
    ))
}

fn check_swaps(fm: &FeatureModel, mode: &ReconfigMode) -> Result<(), FeatureError> {
    let mut events = HashSet::new();
    for g in &mode.swaps {
        compile_swap(g)?;
        if !events.insert(g.event.as_str()) {
            return Err(FeatureError::Duplicate(format!("swap event `{}`", g.event)));
        }
        let mut members = HashSet::new();
        for m in &g.members {
            if fm.feature(m).is_none() {
                return Err(FeatureError::UnknownFeature(m.clone()));
            }
            if !members.insert(m.as_str()) {
                return Err(FeatureError::Duplicate(format!(
                    "feature `{m}` in swap `{}`",
                    g.event
                )));
            }
        }
    }
    Ok(())
}

fn and_all(names: &[String]) -> Expr {
    Expr::fold(BinOp::And, names.iter().map(|n| Expr::name(n)), Expr::Bool(true))
}

/// Lowers a feature model into plain automaton, variable and invariant declarations.
pub fn compile_feature_model(
    fm: &FeatureModel,
    mode: &ReconfigMode,
    strictness: &Strictness,
) -> Result<Vec<Declaration>, FeatureError> {
    fm.validate()?;
    check_swaps(fm, mode)?;
    let mut out = Vec::new();

    for g in &mode.swaps {
        out.push(Declaration::Events(EventGroup {
            controllable: g.controllable,
            names: vec![g.event.clone()],
        }));
    }

    // One definition per (attribute set, reconfiguration) signature.
    let swapped: HashSet<&str> = mode
        .swaps
        .iter()
        .flat_map(|g| g.members.iter().map(String::as_str))
        .collect();
    let mut defs: Vec<(Vec<String>, Reconfig, String)> = Vec::new();
    let mut instances = Vec::new();
    for f in &fm.features {
        let reconfig = mode.of(&f.name);
        if swapped.contains(f.name.as_str()) {
            let Declaration::Automaton { kind, name, mut body } = compile_feature(f, reconfig)
            else {
                unreachable!()
            };
            for g in mode.swaps.iter().filter(|g| g.members.contains(&f.name)) {
                body.locations[0].edges.push(compile_swap(g)?);
            }
            instances.push(Declaration::Automaton { kind, name, body });
            continue;
        }
        let attrs: Vec<String> = f.attributes.iter().map(|(a, _)| a.clone()).collect();
        let def = match defs.iter().find(|(a, r, _)| *a == attrs && *r == reconfig) {
            Some((_, _, n)) => n.clone(),
            None => {
                let base = if attrs.is_empty() {
                    "FEATURE"
                } else {
                    "FEATURE_ATTRIBUTED"
                };
                let taken = defs.iter().filter(|(a, _, _)| a.is_empty() == attrs.is_empty()).count();
                let name = if taken == 0 {
                    base.to_string()
                } else {
                    format!("{base}_{}", taken + 1)
                };
                defs.push((attrs.clone(), reconfig, name.clone()));
                name
            }
        };
        instances.push(Declaration::Instance {
            name: f.name.clone(),
            definition: def,
            args: f.attributes.iter().map(|(_, v)| Expr::Int(*v)).collect(),
        });
    }
    for (attrs, reconfig, name) in &defs {
        let param = |a: &String| {
            if attrs.len() == 1 {
                "x".to_string()
            } else {
                format!("x_{a}")
            }
        };
        let params = attrs
            .iter()
            .map(|a| Param {
                ty: TypeExpr::Int(None),
                name: param(a),
            })
            .collect();
        let bound: Vec<(String, Expr)> = attrs
            .iter()
            .map(|a| (a.clone(), Expr::name(&param(a))))
            .collect();
        out.push(Declaration::AutomatonDef {
            kind: AutomatonKind::Plant,
            name: name.clone(),
            params,
            body: feature_body(&bound, *reconfig),
        });
    }
    out.extend(instances);

    let mut rs = Vec::new();
    for (i, c) in fm.constraints.iter().enumerate() {
        let name = format!("r{}", i + 1);
        out.push(Declaration::Alg(AlgDecl {
            ty: TypeExpr::Bool,
            name: name.clone(),
            value: constraint_formula(c),
        }));
        rs.push(name);
    }
    out.push(Declaration::Alg(AlgDecl {
        ty: TypeExpr::Bool,
        name: "sys_valid".to_string(),
        value: and_all(&rs),
    }));
    for a in &fm.attributes {
        let terms = fm
            .features
            .iter()
            .filter(|f| f.attributes.iter().any(|(n, _)| *n == a.name))
            .map(|f| Expr::name(&format!("{}.{}", f.name, a.name)));
        out.push(Declaration::Alg(AlgDecl {
            ty: TypeExpr::Int(None),
            name: format!("{}_sum", a.name),
            value: Expr::fold(BinOp::Add, terms, Expr::Int(0)),
        }));
    }
    let mut validity = vec!["sys_valid".to_string()];
    for (name, e) in &fm.attribute_constraints {
        out.push(Declaration::Alg(AlgDecl {
            ty: TypeExpr::Bool,
            name: name.clone(),
            value: e.clone(),
        }));
        validity.push(name.clone());
    }
    out.push(Declaration::Automaton {
        kind: AutomatonKind::Plant,
        name: "Validity".to_string(),
        body: AutomatonBody {
            locations: vec![single_location(Some(and_all(&validity)), Vec::new())],
            ..Default::default()
        },
    });
    match strictness {
        Strictness::Strict => out.push(Declaration::PlantInvariant(and_all(&validity))),
        Strictness::Relaxed(extra) => {
            out.extend(extra.iter().cloned().map(Declaration::PlantInvariant))
        }
    }
    Ok(out)
}

/// Lowers a compact `featuremodel` block.
pub fn lower_decl(decl: &FeatureModelDecl) -> Result<Vec<Declaration>, FeatureError> {
    let (fm, mode, strictness) = FeatureModel::from_decl(decl)?;
    compile_feature_model(&fm, &mode, &strictness)
}
