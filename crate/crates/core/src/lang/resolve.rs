//! Name resolution, instantiation and type checking.

use std::collections::HashMap;

use super::ast::{self, AutomatonBody, Declaration, DiscInit, Path, TypeExpr};
use super::error::{At, LangError, ResolveKind};
use super::source::{Position, SourceFile, Span};
use crate::model::{
    Alg, Automaton, Edge, EnumType, Event, Expr, Kind, Location, Model, Requirement, Sort, Type,
    Var, VarInit,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolveOptions {
    /// Domain for `int` discrete variables declared without a range.
    pub int_range: (i64, i64),
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { int_range: (0, 255) }
    }
}

const UNBOUNDED: Type = Type::Int {
    lo: i64::MIN,
    hi: i64::MAX,
};

#[derive(Clone, Copy, Debug)]
enum Sym {
    Var(usize),
    Alg(usize),
    Loc(usize, usize),
    Literal(usize, u32),
    Event(usize),
}

struct Frame<'a> {
    name: String,
    kind: Kind,
    body: &'a AutomatonBody,
    params: HashMap<String, (Expr, Sort)>,
    span: Span,
}

struct Resolver<'a> {
    files: &'a [SourceFile],
    opts: ResolveOptions,
    model: Model,
    /// Fully qualified names of everything except events and automata.
    symbols: HashMap<String, Sym>,
    events: HashMap<String, usize>,
    automata: HashMap<String, usize>,
    alg_sources: Vec<(Option<usize>, &'a ast::Expr, Span, HashMap<String, (Expr, Sort)>)>,
}

/// Resolves a parsed specification into a flat [`Model`].
pub fn resolve(spec: &ast::SourceSpec, opts: &ResolveOptions) -> Result<Model, LangError> {
    if spec.declarations.is_empty() {
        return Err(LangError::Empty);
    }
    let mut lowered: Vec<(Declaration, Span)> = Vec::new();
    for (d, span) in spec.declarations.iter().zip(&spec.spans) {
        match d {
            Declaration::FeatureModel(fm) => {
                let decls = crate::feature::lower_decl(fm).map_err(|e| LangError::Resolve {
                    at: At(Position::of(&spec.files, *span)),
                    kind: e.kind(),
                    message: e.to_string(),
                })?;
                lowered.extend(decls.into_iter().map(|d| (d, *span)));
            }
            other => lowered.push((other.clone(), *span)),
        }
    }
    let mut r = Resolver {
        files: &spec.files,
        opts: *opts,
        model: Model::default(),
        symbols: HashMap::new(),
        events: HashMap::new(),
        automata: HashMap::new(),
        alg_sources: Vec::new(),
    };
    r.run(&lowered)?;
    Ok(r.model)
}

/// Resolves a boolean expression against the names of an already resolved model.
pub fn resolve_expr(model: &Model, text: &str) -> Result<Expr, LangError> {
    let ast = super::parser::parse_expr(text)?;
    let mut r = Resolver {
        files: &[],
        opts: ResolveOptions::default(),
        model: model.clone(),
        symbols: HashMap::new(),
        events: HashMap::new(),
        automata: HashMap::new(),
        alg_sources: Vec::new(),
    };
    for (id, en) in model.enums.iter().enumerate() {
        for (i, lit) in en.literals.iter().enumerate() {
            r.symbols.insert(lit.clone(), Sym::Literal(id, i as u32));
        }
    }
    for (v, var) in model.vars.iter().enumerate() {
        r.symbols.insert(var.name.clone(), Sym::Var(v));
    }
    for (a, alg) in model.algs.iter().enumerate() {
        r.symbols.insert(alg.name.clone(), Sym::Alg(a));
    }
    for (a, aut) in model.automata.iter().enumerate() {
        r.automata.insert(aut.name.clone(), a);
        for (l, loc) in aut.locations.iter().enumerate() {
            if let Some(n) = &loc.name {
                r.symbols.insert(format!("{}.{n}", aut.name), Sym::Loc(a, l));
            }
        }
    }
    for (e, ev) in model.events.iter().enumerate() {
        r.events.insert(ev.name.clone(), e);
    }
    r.bool_expr(&ast, None, &HashMap::new(), Span::default())
}

fn param_sort(model: &Model, t: &TypeExpr) -> Option<Sort> {
    match t {
        TypeExpr::Bool => Some(Sort::Bool),
        TypeExpr::Int(_) => Some(Sort::Int),
        TypeExpr::Named(n) => model
            .enums
            .iter()
            .position(|e| &e.name == n)
            .map(Sort::Enum),
    }
}

impl<'a> Resolver<'a> {
    fn err(&self, span: Span, kind: ResolveKind, message: impl Into<String>) -> LangError {
        LangError::Resolve {
            at: At(Position::of(self.files, span)),
            kind,
            message: message.into(),
        }
    }

    fn declare(&mut self, name: String, sym: Sym, span: Span) -> Result<(), LangError> {
        if self.symbols.contains_key(&name) || self.automata.contains_key(&name) {
            return Err(self.err(span, ResolveKind::Duplicate, format!("`{name}` is declared twice")));
        }
        self.symbols.insert(name, sym);
        Ok(())
    }

    fn declare_event(&mut self, name: String, controllable: bool, span: Span) -> Result<(), LangError> {
        if self.events.contains_key(&name) || self.symbols.contains_key(&name) {
            return Err(self.err(span, ResolveKind::Duplicate, format!("event `{name}` is declared twice")));
        }
        self.events.insert(name.clone(), self.model.events.len());
        self.model.events.push(Event { name, controllable });
        Ok(())
    }

    fn resolve_type(&mut self, t: &TypeExpr, span: Span, what: &str, disc: bool) -> Result<Type, LangError> {
        Ok(match t {
            TypeExpr::Bool => Type::Bool,
            TypeExpr::Int(Some((lo, hi))) => {
                if lo > hi || *lo < i32::MIN as i64 || *hi > i32::MAX as i64 {
                    return Err(self.err(span, ResolveKind::Range, format!("invalid range {lo}..{hi} for {what}")));
                }
                Type::Int { lo: *lo, hi: *hi }
            }
            TypeExpr::Int(None) if disc => {
                let (lo, hi) = self.opts.int_range;
                let pos = Position::of(self.files, span).map_or(String::new(), |p| format!("{p}: "));
                self.model.warnings.push(format!(
                    "{pos}integer variable {what} has no range; using {lo}..{hi}"
                ));
                Type::Int { lo, hi }
            }
            TypeExpr::Int(None) => UNBOUNDED,
            TypeExpr::Named(n) => match self.model.enums.iter().position(|e| &e.name == n) {
                Some(e) => Type::Enum(e),
                None => return Err(self.err(span, ResolveKind::UnknownName, format!("unknown type `{n}`"))),
            },
        })
    }

    fn run(&mut self, decls: &'a [(Declaration, Span)]) -> Result<(), LangError> {
        // Global declarations that others refer to.
        let mut defs: HashMap<&str, (&ast::AutomatonKind, &[ast::Param], &AutomatonBody)> = HashMap::new();
        for (d, span) in decls {
            match d {
                Declaration::Enum { name, literals } => {
                    if self.model.enums.iter().any(|e| &e.name == name) {
                        return Err(self.err(*span, ResolveKind::Duplicate, format!("enumeration `{name}` is declared twice")));
                    }
                    let id = self.model.enums.len();
                    for (i, lit) in literals.iter().enumerate() {
                        self.declare(lit.clone(), Sym::Literal(id, i as u32), *span)?;
                    }
                    self.model.enums.push(EnumType {
                        name: name.clone(),
                        literals: literals.clone(),
                    });
                }
                Declaration::Events(g) => {
                    for n in &g.names {
                        self.declare_event(n.clone(), g.controllable, *span)?;
                    }
                }
                Declaration::AutomatonDef { kind, name, params, body } => {
                    if defs.insert(name, (kind, params, body)).is_some() {
                        return Err(self.err(*span, ResolveKind::Duplicate, format!("definition `{name}` is declared twice")));
                    }
                }
                _ => {}
            }
        }

        // Global algebraic variables.
        for (d, span) in decls {
            if let Declaration::Alg(a) = d {
                let ty = self.resolve_type(&a.ty, *span, &a.name, false)?;
                let id = self.model.algs.len();
                self.declare(a.name.clone(), Sym::Alg(id), *span)?;
                self.model.algs.push(Alg {
                    name: a.name.clone(),
                    ty,
                    def: Expr::Bool(false),
                });
                self.alg_sources.push((None, &a.value, *span, HashMap::new()));
            }
        }

        // Automata, in order, with instances expanded.
        let mut frames: Vec<Frame<'a>> = Vec::new();
        for (d, span) in decls {
            match d {
                Declaration::Automaton { kind, name, body } => frames.push(Frame {
                    name: name.clone(),
                    kind: (*kind).into(),
                    body,
                    params: HashMap::new(),
                    span: *span,
                }),
                Declaration::Instance { name, definition, args } => {
                    let Some((kind, params, body)) = defs.get(definition.as_str()) else {
                        return Err(self.err(*span, ResolveKind::UnknownName, format!("unknown automaton definition `{definition}`")));
                    };
                    if params.len() != args.len() {
                        return Err(self.err(
                            *span,
                            ResolveKind::Arity,
                            format!("`{definition}` takes {} argument(s), {} given for `{name}`", params.len(), args.len()),
                        ));
                    }
                    let mut bound = HashMap::new();
                    for (p, a) in params.iter().zip(args) {
                        let want = param_sort(&self.model, &p.ty).ok_or_else(|| {
                            self.err(*span, ResolveKind::UnknownName, format!("unknown parameter type of `{}`", p.name))
                        })?;
                        let (e, got) = self.expr(a, None, &HashMap::new(), *span)?;
                        if got != want {
                            return Err(self.err(
                                *span,
                                ResolveKind::TypeMismatch,
                                format!("argument for parameter `{}` of `{definition}` has the wrong type", p.name),
                            ));
                        }
                        bound.insert(p.name.clone(), (e, got));
                    }
                    frames.push(Frame {
                        name: name.clone(),
                        kind: (**kind).into(),
                        body,
                        params: bound,
                        span: *span,
                    });
                }
                _ => {}
            }
        }

        for f in &frames {
            self.declare_automaton(f)?;
        }
        for (i, f) in frames.iter().enumerate() {
            self.fill_automaton(i, f)?;
        }

        // Algebraic definitions.
        let sources = std::mem::take(&mut self.alg_sources);
        for (id, (aut, value, span, params)) in sources.iter().enumerate() {
            let (e, sort) = self.expr(value, *aut, params, *span)?;
            let want = Sort::from(self.model.algs[id].ty);
            if sort != want {
                return Err(self.err(
                    *span,
                    ResolveKind::TypeMismatch,
                    format!("definition of `{}` does not match its declared type", self.model.algs[id].name),
                ));
            }
            self.model.algs[id].def = e;
        }
        self.check_acyclic(&sources)?;

        // Invariants and requirements.
        for (d, span) in decls {
            match d {
                Declaration::PlantInvariant(e) => {
                    let e = self.bool_expr(e, None, &HashMap::new(), *span)?;
                    self.model.plant_invariants.push(e);
                }
                Declaration::Requirement(ast::RequirementForm::Invariant(e)) => {
                    let e = self.bool_expr(e, None, &HashMap::new(), *span)?;
                    self.model.requirements.push(Requirement::Invariant(e));
                }
                Declaration::Requirement(ast::RequirementForm::Needs { event, condition }) => {
                    let ev = self.event_ref(event, None, *span)?;
                    let condition = self.bool_expr(condition, None, &HashMap::new(), *span)?;
                    self.model.requirements.push(Requirement::Needs { event: ev, condition });
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn declare_automaton(&mut self, f: &Frame<'a>) -> Result<(), LangError> {
        if self.automata.contains_key(&f.name) || self.symbols.contains_key(&f.name) {
            return Err(self.err(f.span, ResolveKind::Duplicate, format!("automaton `{}` is declared twice", f.name)));
        }
        let id = self.model.automata.len();
        self.automata.insert(f.name.clone(), id);
        let body = f.body;
        if body.locations.is_empty() {
            return Err(self.err(f.span, ResolveKind::Structure, format!("automaton `{}` has no locations", f.name)));
        }
        if body.locations.len() > 1 && body.locations.iter().any(|l| l.name.is_none()) {
            return Err(self.err(
                f.span,
                ResolveKind::Structure,
                format!("automaton `{}` has several locations, so each needs a name", f.name),
            ));
        }
        let q = |n: &str| format!("{}.{n}", f.name);
        for g in &body.events {
            for n in &g.names {
                self.declare_event(q(n), g.controllable, f.span)?;
            }
        }
        let mut local_names: std::collections::HashSet<String> = body
            .events
            .iter()
            .flat_map(|g| g.names.iter().cloned())
            .collect();
        let mut local = |r: &Self, n: &str, span: Span| -> Result<(), LangError> {
            if !local_names.insert(n.to_string()) {
                return Err(r.err(span, ResolveKind::Duplicate, format!("`{n}` is declared twice in `{}`", f.name)));
            }
            Ok(())
        };
        for d in &body.discs {
            local(self, &d.name, f.span)?;
            let ty = self.resolve_type(&d.ty, f.span, &q(&d.name), true)?;
            let init = match &d.init {
                DiscInit::Any => VarInit::Any,
                DiscInit::Default => VarInit::Value(match ty {
                    Type::Int { lo, hi } if !(lo..=hi).contains(&0) => lo,
                    _ => 0,
                }),
                DiscInit::Value(e) => {
                    let (v, sort) = self.expr(e, None, &f.params, f.span)?;
                    if sort != Sort::from(ty) {
                        return Err(self.err(f.span, ResolveKind::TypeMismatch, format!("initial value of `{}`", q(&d.name))));
                    }
                    let value = self.constant(&v).ok_or_else(|| {
                        self.err(f.span, ResolveKind::Unsupported, format!("initial value of `{}` is not constant", q(&d.name)))
                    })?;
                    if !ty.contains(&self.model, value) {
                        return Err(self.err(f.span, ResolveKind::Range, format!("initial value {value} of `{}`", q(&d.name))));
                    }
                    VarInit::Value(value)
                }
            };
            let vid = self.model.vars.len();
            self.declare(q(&d.name), Sym::Var(vid), f.span)?;
            self.model.vars.push(Var {
                name: q(&d.name),
                owner: id,
                ty,
                init,
            });
        }
        for a in &body.algs {
            local(self, &a.name, f.span)?;
            let ty = self.resolve_type(&a.ty, f.span, &q(&a.name), false)?;
            let aid = self.model.algs.len();
            self.declare(q(&a.name), Sym::Alg(aid), f.span)?;
            self.model.algs.push(Alg {
                name: q(&a.name),
                ty,
                def: Expr::Bool(false),
            });
            self.alg_sources.push((Some(id), &a.value, f.span, f.params.clone()));
        }
        let mut locations = Vec::new();
        for (l, loc) in body.locations.iter().enumerate() {
            if let Some(n) = &loc.name {
                local(self, n, loc.span)?;
                self.declare(q(n), Sym::Loc(id, l), loc.span)?;
            }
            locations.push(Location {
                name: loc.name.clone(),
                initial: None,
                marked: loc.marked,
            });
        }
        let vars = self
            .model
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.owner == id)
            .map(|(i, _)| i)
            .collect();
        self.model.automata.push(Automaton {
            name: f.name.clone(),
            kind: f.kind,
            locations,
            edges: Vec::new(),
            vars,
            alphabet: Vec::new(),
            monitor: Vec::new(),
        });
        Ok(())
    }

    fn fill_automaton(&mut self, id: usize, f: &Frame<'a>) -> Result<(), LangError> {
        let body = f.body;
        let mut edges = Vec::new();
        for (l, loc) in body.locations.iter().enumerate() {
            if let Some(init) = &loc.initial {
                let pred = match init {
                    None => Expr::Bool(true),
                    Some(p) => self.bool_expr(p, Some(id), &f.params, loc.span)?,
                };
                self.model.automata[id].locations[l].initial = Some(pred);
            }
            for edge in &loc.edges {
                let guard = match &edge.guard {
                    Some(g) => self.bool_expr(g, Some(id), &f.params, edge.span)?,
                    None => Expr::Bool(true),
                };
                let mut updates: Vec<(usize, Expr)> = Vec::new();
                for (name, value) in &edge.updates {
                    let qn = format!("{}.{name}", f.name);
                    let var = match self.symbols.get(&qn) {
                        Some(Sym::Var(v)) => *v,
                        _ => {
                            let elsewhere = self
                                .model
                                .vars
                                .iter()
                                .any(|v| v.name.rsplit('.').next() == Some(name.as_str()));
                            let kind = if elsewhere {
                                ResolveKind::NonLocalWrite
                            } else {
                                ResolveKind::UnknownName
                            };
                            return Err(self.err(edge.span, kind, format!("`{name}` is not a variable of `{}`", f.name)));
                        }
                    };
                    if updates.iter().any(|(v, _)| *v == var) {
                        return Err(self.err(edge.span, ResolveKind::Duplicate, format!("`{name}` is assigned twice")));
                    }
                    let (e, sort) = self.expr(value, Some(id), &f.params, edge.span)?;
                    if sort != Sort::from(self.model.vars[var].ty) {
                        return Err(self.err(edge.span, ResolveKind::TypeMismatch, format!("assignment to `{qn}`")));
                    }
                    updates.push((var, e));
                }
                let target = match &edge.target {
                    None => l,
                    Some(t) => self.model.automata[id].location_index(t).ok_or_else(|| {
                        self.err(edge.span, ResolveKind::UnknownName, format!("unknown location `{t}` in `{}`", f.name))
                    })?,
                };
                for ev in &edge.events {
                    let event = self.event_ref(ev, Some(id), edge.span)?;
                    edges.push(Edge {
                        source: l,
                        event,
                        guard: guard.clone(),
                        updates: updates.clone(),
                        target,
                    });
                }
            }
        }
        let mut alphabet: Vec<usize> = edges.iter().map(|e| e.event).collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        if let Some(explicit) = &body.alphabet {
            let mut declared = Vec::new();
            for p in explicit {
                declared.push(self.event_ref(p, Some(id), f.span)?);
            }
            declared.sort_unstable();
            declared.dedup();
            if let Some(e) = alphabet.iter().find(|e| declared.binary_search(e).is_err()) {
                return Err(self.err(
                    f.span,
                    ResolveKind::Structure,
                    format!("event `{}` of `{}` is missing from its alphabet", self.model.events[*e].name, f.name),
                ));
            }
            alphabet = declared;
        }
        let monitor = match &body.monitor {
            None => Vec::new(),
            Some(list) if list.is_empty() => alphabet.clone(),
            Some(list) => {
                let mut m = Vec::new();
                for p in list {
                    let e = self.event_ref(p, Some(id), f.span)?;
                    if alphabet.binary_search(&e).is_err() {
                        return Err(self.err(f.span, ResolveKind::Structure, format!("monitored event `{p}` is not in the alphabet of `{}`", f.name)));
                    }
                    m.push(e);
                }
                m.sort_unstable();
                m.dedup();
                m
            }
        };
        let aut = &mut self.model.automata[id];
        aut.edges = edges;
        aut.alphabet = alphabet;
        aut.monitor = monitor;
        Ok(())
    }

    fn event_ref(&self, p: &Path, aut: Option<usize>, span: Span) -> Result<usize, LangError> {
        let found = match (p.0.as_slice(), aut) {
            ([n], Some(a)) => self
                .events
                .get(&format!("{}.{n}", self.model.automata[a].name))
                .or_else(|| self.events.get(n)),
            _ => self.events.get(&p.to_string()),
        };
        found
            .copied()
            .ok_or_else(|| self.err(span, ResolveKind::UnknownName, format!("unknown event `{p}`")))
    }

    fn lookup(&self, p: &Path, aut: Option<usize>) -> Option<Sym> {
        match p.0.as_slice() {
            [n] => aut
                .and_then(|a| self.symbols.get(&format!("{}.{n}", self.model.automata[a].name)))
                .or_else(|| self.symbols.get(n))
                .copied(),
            [a, n] => self.symbols.get(&format!("{a}.{n}")).copied(),
            _ => None,
        }
        .or_else(|| self.events.get(&p.to_string()).map(|&e| Sym::Event(e)))
    }

    fn bool_expr(
        &self,
        e: &ast::Expr,
        aut: Option<usize>,
        params: &HashMap<String, (Expr, Sort)>,
        span: Span,
    ) -> Result<Expr, LangError> {
        let (x, sort) = self.expr(e, aut, params, span)?;
        if sort != Sort::Bool {
            return Err(self.err(span, ResolveKind::TypeMismatch, "expected a boolean expression".to_string()));
        }
        Ok(x)
    }

    fn expr(
        &self,
        e: &ast::Expr,
        aut: Option<usize>,
        params: &HashMap<String, (Expr, Sort)>,
        span: Span,
    ) -> Result<(Expr, Sort), LangError> {
        use ast::BinOp as B;
        let mismatch = |what: &str| self.err(span, ResolveKind::TypeMismatch, what.to_string());
        Ok(match e {
            ast::Expr::Bool(b) => (Expr::Bool(*b), Sort::Bool),
            ast::Expr::Int(n) => (Expr::Int(*n), Sort::Int),
            ast::Expr::Paren(x) => self.expr(x, aut, params, span)?,
            ast::Expr::Name(p, nspan) => {
                if let [n] = p.0.as_slice() {
                    if let Some((x, s)) = params.get(n) {
                        return Ok((x.clone(), *s));
                    }
                }
                let at = if nspan.end > nspan.start { *nspan } else { span };
                match self.lookup(p, aut) {
                    Some(Sym::Var(v)) => (Expr::Var(v), self.model.vars[v].ty.into()),
                    Some(Sym::Alg(a)) => (Expr::Alg(a), self.model.algs[a].ty.into()),
                    Some(Sym::Loc(a, l)) => (Expr::Loc(a, l), Sort::Bool),
                    Some(Sym::Literal(en, i)) => (Expr::Enum(en, i), Sort::Enum(en)),
                    Some(Sym::Event(e)) => {
                        let name = &self.model.events[e].name;
                        return Err(self.err(at, ResolveKind::TypeMismatch, format!("event `{name}` used as a value")))
                    }
                    None => return Err(self.err(at, ResolveKind::UnknownName, format!("unknown name `{p}`"))),
                }
            }
            ast::Expr::Unary(op, x) => {
                let (x, s) = self.expr(x, aut, params, span)?;
                match op {
                    ast::UnOp::Not if s == Sort::Bool => (Expr::Not(Box::new(x)), Sort::Bool),
                    ast::UnOp::Neg if s == Sort::Int => (Expr::Neg(Box::new(x)), Sort::Int),
                    ast::UnOp::Not => return Err(mismatch("`not` needs a boolean operand")),
                    ast::UnOp::Neg => return Err(mismatch("`-` needs an integer operand")),
                }
            }
            ast::Expr::Binary(op, a, b) => {
                let (x, sa) = self.expr(a, aut, params, span)?;
                let (y, sb) = self.expr(b, aut, params, span)?;
                let sort = match op {
                    B::And | B::Or | B::Implies | B::Iff => {
                        if sa != Sort::Bool || sb != Sort::Bool {
                            return Err(mismatch(&format!("`{}` needs boolean operands", op.symbol())));
                        }
                        Sort::Bool
                    }
                    B::Eq | B::Ne => {
                        if sa != sb {
                            return Err(mismatch(&format!("`{}` compares values of different types", op.symbol())));
                        }
                        Sort::Bool
                    }
                    B::Lt | B::Le | B::Gt | B::Ge => {
                        if sa != Sort::Int || sb != Sort::Int {
                            return Err(mismatch(&format!("`{}` needs integer operands", op.symbol())));
                        }
                        Sort::Bool
                    }
                    B::Add | B::Sub | B::Mul => {
                        if sa != Sort::Int || sb != Sort::Int {
                            return Err(mismatch(&format!("`{}` needs integer operands", op.symbol())));
                        }
                        Sort::Int
                    }
                };
                (Expr::Bin(*op, Box::new(x), Box::new(y)), sort)
            }
            ast::Expr::If(c, t, f) => {
                let (c, sc) = self.expr(c, aut, params, span)?;
                let (t, st) = self.expr(t, aut, params, span)?;
                let (f, sf) = self.expr(f, aut, params, span)?;
                if sc != Sort::Bool {
                    return Err(mismatch("`if` condition must be boolean"));
                }
                if st != sf {
                    return Err(mismatch("`if` branches have different types"));
                }
                (Expr::If(Box::new(c), Box::new(t), Box::new(f)), st)
            }
        })
    }

    fn constant(&self, e: &Expr) -> Option<i64> {
        let mut pure = true;
        e.visit(&mut |x| {
            if matches!(x, Expr::Var(_) | Expr::Alg(_) | Expr::Loc(..)) {
                pure = false;
            }
        });
        if !pure {
            return None;
        }
        let state = vec![0; self.model.state_len()];
        self.model.eval(e, &state).ok()
    }

    fn check_acyclic(
        &self,
        sources: &[(Option<usize>, &ast::Expr, Span, HashMap<String, (Expr, Sort)>)],
    ) -> Result<(), LangError> {
        let n = self.model.algs.len();
        let deps: Vec<Vec<usize>> = self
            .model
            .algs
            .iter()
            .map(|a| {
                let mut d = Vec::new();
                a.def.visit(&mut |x| {
                    if let Expr::Alg(b) = x {
                        d.push(*b);
                    }
                });
                d
            })
            .collect();
        // 0 unvisited, 1 on stack, 2 done.
        let mut color = vec![0u8; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            color[root] = 1;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < deps[v].len() {
                    let w = deps[v][*i];
                    *i += 1;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => {
                            let start = stack.iter().position(|&(x, _)| x == w).unwrap_or(0);
                            let mut cycle: Vec<&str> =
                                stack[start..].iter().map(|&(x, _)| self.model.algs[x].name.as_str()).collect();
                            cycle.push(&self.model.algs[w].name);
                            return Err(self.err(sources[w].2, ResolveKind::CyclicAlgebraic, cycle.join(" -> ")));
                        }
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    stack.pop();
                }
            }
        }
        Ok(())
    }
}
