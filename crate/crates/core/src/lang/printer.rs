//! Pretty-printer back to `.fsc` text. Output reparses to an equal AST.

use std::fmt::Write;

use super::ast::*;

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Name(p, _) => {
            let _ = write!(out, "{p}");
        }
        Expr::Paren(inner) => {
            out.push('(');
            write_expr(out, inner);
            out.push(')');
        }
        Expr::Unary(op, inner) => {
            match op {
                UnOp::Not => out.push_str("not"),
                UnOp::Neg => out.push('-'),
            }
            let needs_parens = inner.precedence() < UNARY_PRECEDENCE;
            if needs_parens {
                out.push('(');
                write_expr(out, inner);
                out.push(')');
            } else {
                if *op == UnOp::Not && !matches!(**inner, Expr::Paren(_)) {
                    out.push(' ');
                }
                write_expr(out, inner);
            }
        }
        Expr::Binary(op, a, b) => {
            let p = op.precedence();
            let left_parens = a.precedence() < p || (a.precedence() == p && op.right_associative());
            let right_parens =
                b.precedence() < p || (b.precedence() == p && !op.right_associative());
            write_operand(out, a, left_parens);
            let _ = write!(out, " {} ", op.symbol());
            write_operand(out, b, right_parens);
        }
        Expr::If(c, t, f) => {
            out.push_str("if ");
            write_expr(out, c);
            out.push_str(" : ");
            write_expr(out, t);
            out.push_str(" else ");
            write_expr(out, f);
            out.push_str(" end");
        }
    }
}

fn write_operand(out: &mut String, e: &Expr, parens: bool) {
    if parens {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_type(out: &mut String, t: &TypeExpr) {
    match t {
        TypeExpr::Bool => out.push_str("bool"),
        TypeExpr::Int(None) => out.push_str("int"),
        TypeExpr::Int(Some((lo, hi))) => {
            let _ = write!(out, "int[{lo}..{hi}]");
        }
        TypeExpr::Named(n) => out.push_str(n),
    }
}

fn join_paths(paths: &[Path]) -> String {
    paths
        .iter()
        .map(Path::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_events(out: &mut String, g: &EventGroup, indent: &str) {
    let kw = if g.controllable {
        "controllable"
    } else {
        "uncontrollable"
    };
    let _ = writeln!(out, "{indent}{kw} {};", g.names.join(", "));
}

fn write_alg(out: &mut String, a: &AlgDecl, indent: &str) {
    let _ = write!(out, "{indent}alg ");
    write_type(out, &a.ty);
    let _ = writeln!(out, " {} = {};", a.name, print_expr(&a.value));
}

fn write_body(out: &mut String, body: &AutomatonBody) {
    for g in &body.events {
        write_events(out, g, "  ");
    }
    for d in &body.discs {
        out.push_str("  disc ");
        write_type(out, &d.ty);
        let _ = write!(out, " {}", d.name);
        match &d.init {
            DiscInit::Default => {}
            DiscInit::Value(e) => {
                let _ = write!(out, " = {}", print_expr(e));
            }
            DiscInit::Any => out.push_str(" in any"),
        }
        out.push_str(";\n");
    }
    for a in &body.algs {
        write_alg(out, a, "  ");
    }
    if let Some(m) = &body.monitor {
        if m.is_empty() {
            out.push_str("  monitor;\n");
        } else {
            let _ = writeln!(out, "  monitor {};", join_paths(m));
        }
    }
    if let Some(a) = &body.alphabet {
        if a.is_empty() {
            out.push_str("  alphabet;\n");
        } else {
            let _ = writeln!(out, "  alphabet {};", join_paths(a));
        }
    }
    for loc in &body.locations {
        match &loc.name {
            Some(n) => {
                let _ = write!(out, "  location {n}:");
            }
            None => out.push_str("  location:"),
        }
        let item = |out: &mut String, text: &str| {
            out.push(' ');
            out.push_str(text);
        };
        match &loc.initial {
            Some(None) => item(out, "initial;"),
            Some(Some(p)) => item(out, &format!("initial {};", print_expr(p))),
            None => {}
        }
        if loc.marked {
            item(out, "marked;");
        }
        out.push('\n');
        for e in &loc.edges {
            let _ = write!(out, "    edge {}", join_paths(&e.events));
            if let Some(g) = &e.guard {
                let _ = write!(out, " when {}", print_expr(g));
            }
            if !e.updates.is_empty() {
                let ups: Vec<String> = e
                    .updates
                    .iter()
                    .map(|(v, x)| format!("{v} := {}", print_expr(x)))
                    .collect();
                let _ = write!(out, " do {}", ups.join(", "));
            }
            if let Some(t) = &e.target {
                let _ = write!(out, " goto {t}");
            }
            out.push_str(";\n");
        }
    }
    out.push_str("end\n");
}

pub fn print_declaration(d: &Declaration) -> String {
    let mut out = String::new();
    match d {
        Declaration::Enum { name, literals } => {
            let _ = writeln!(out, "enum {name} = {};", literals.join(", "));
        }
        Declaration::Events(g) => write_events(&mut out, g, ""),
        Declaration::Alg(a) => write_alg(&mut out, a, ""),
        Declaration::AutomatonDef {
            kind,
            name,
            params,
            body,
        } => {
            let ps: Vec<String> = params
                .iter()
                .map(|p| {
                    let mut s = String::from("alg ");
                    write_type(&mut s, &p.ty);
                    s.push(' ');
                    s.push_str(&p.name);
                    s
                })
                .collect();
            let _ = writeln!(out, "{} def {name}({}):", kind.keyword(), ps.join(", "));
            write_body(&mut out, body);
        }
        Declaration::Automaton { kind, name, body } => {
            let _ = writeln!(out, "{} automaton {name}:", kind.keyword());
            write_body(&mut out, body);
        }
        Declaration::Instance {
            name,
            definition,
            args,
        } => {
            let a: Vec<String> = args.iter().map(print_expr).collect();
            let _ = writeln!(out, "{name}: {definition}({});", a.join(", "));
        }
        Declaration::PlantInvariant(e) => {
            let _ = writeln!(out, "plant invariant {};", print_expr(e));
        }
        Declaration::Requirement(RequirementForm::Invariant(e)) => {
            let _ = writeln!(out, "requirement {};", print_expr(e));
        }
        Declaration::Requirement(RequirementForm::Needs { event, condition }) => {
            let _ = writeln!(out, "requirement {event} needs {};", print_expr(condition));
        }
        Declaration::FeatureModel(fm) => write_feature_model(&mut out, fm),
    }
    out
}

fn write_feature_model(out: &mut String, fm: &FeatureModelDecl) {
    let _ = writeln!(out, "featuremodel {}:", fm.name);
    if !fm.features.is_empty() {
        let _ = writeln!(out, "  feature {};", fm.features.join(", "));
    }
    for r in &fm.relations {
        if r.kind == RelationKind::Root {
            let _ = writeln!(out, "  root {};", r.parent);
        } else {
            let _ = writeln!(
                out,
                "  {} {}: {};",
                r.kind.word(),
                r.parent,
                r.children.join(", ")
            );
        }
    }
    for a in &fm.attributes {
        let vals: Vec<String> = a.values.iter().map(|(f, v)| format!("{f} = {v}")).collect();
        let agg = a.aggregate.as_deref().map_or(String::new(), |g| format!(" {g}"));
        let _ = writeln!(out, "  attribute int {}{agg}: {};", a.name, vals.join(", "));
    }
    for (name, e) in &fm.constraints {
        let _ = writeln!(out, "  constraint {name} = {};", print_expr(e));
    }
    for m in &fm.modes {
        match m {
            ModeDecl::Static => out.push_str("  static;\n"),
            ModeDecl::Dynamic {
                controllable,
                features,
            } => {
                let c = if *controllable {
                    "controllable"
                } else {
                    "uncontrollable"
                };
                if features.is_empty() {
                    let _ = writeln!(out, "  dynamic {c};");
                } else {
                    let _ = writeln!(out, "  dynamic {c} [{}];", features.join(", "));
                }
            }
        }
    }
    for s in &fm.swaps {
        let c = if s.controllable {
            "controllable"
        } else {
            "uncontrollable"
        };
        let _ = writeln!(out, "  swap {c} {}: {};", s.event, s.members.join(", "));
    }
    match fm.strictness {
        Some(StrictnessDecl::Strict) => out.push_str("  strict;\n"),
        Some(StrictnessDecl::Relaxed) => out.push_str("  relaxed;\n"),
        None => {}
    }
    for e in &fm.invariants {
        let _ = writeln!(out, "  invariant {};", print_expr(e));
    }
    out.push_str("end\n");
}

pub fn print_spec(spec: &SourceSpec) -> String {
    let mut out = String::new();
    let mut prev_block = false;
    for d in &spec.declarations {
        let block = matches!(
            d,
            Declaration::Automaton { .. }
                | Declaration::AutomatonDef { .. }
                | Declaration::FeatureModel(_)
        );
        if !out.is_empty() && (block || prev_block) {
            out.push('\n');
        }
        out.push_str(&print_declaration(d));
        prev_block = block;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_expr, parse_source};
    use super::*;

    fn roundtrip_expr(src: &str) -> String {
        let e = parse_expr(src).unwrap();
        let printed = print_expr(&e);
        assert_eq!(parse_expr(&printed).unwrap(), e, "{printed}");
        printed
    }

    #[test]
    fn not_prints_as_keyword() {
        assert_eq!(
            roundtrip_expr("not(FD.present and FP.present)"),
            "not(FD.present and FP.present)"
        );
        assert_eq!(roundtrip_expr("not present"), "not present");
        assert_eq!(roundtrip_expr("- x * 3"), "-x * 3");
        assert_eq!(roundtrip_expr("a => b => c"), "a => b => c");
    }

    #[test]
    fn constructed_trees_get_parens() {
        let e = Expr::bin(
            BinOp::And,
            Expr::bin(BinOp::Or, Expr::name("a"), Expr::name("b")),
            Expr::not(Expr::bin(BinOp::And, Expr::name("c"), Expr::name("d"))),
        );
        assert_eq!(print_expr(&e), "(a or b) and not(c and d)");
        let e = Expr::bin(
            BinOp::Sub,
            Expr::name("a"),
            Expr::bin(BinOp::Sub, Expr::name("b"), Expr::name("c")),
        );
        assert_eq!(print_expr(&e), "a - (b - c)");
    }

    #[test]
    fn spec_roundtrip() {
        let src = "plant automaton ExampleAutomaton:
controllable start, process;
uncontrollable finish;
disc int c = 0;
  location Idle: initial; marked;
    edge start goto Busy;
  location Busy:
    edge process when c<5 do c:=c+1;
    edge finish when c>4 do c:=0 goto Idle;
end
F1: FEATURE();
requirement Coffee.coffee needs CoinPresence.CoinPresent;";
        let spec = parse_source("t", src).unwrap();
        let printed = print_spec(&spec);
        let again = parse_source("t", &printed).unwrap();
        assert_eq!(again.declarations, spec.declarations, "{printed}");
    }
}
