//! Resolved, flattened specification: every name is an index.

use std::fmt;

use thiserror::Error;

use crate::lang::ast::{self, BinOp, Path};
use crate::lang::printer::print_expr;

pub type AutId = usize;
pub type LocId = usize;
pub type VarId = usize;
pub type AlgId = usize;
pub type EventId = usize;
pub type EnumId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Bool,
    Int { lo: i64, hi: i64 },
    Enum(EnumId),
}

impl Type {
    pub fn is_int(self) -> bool {
        matches!(self, Type::Int { .. })
    }

    /// Number of values in the domain, given enum sizes.
    pub fn domain_size(self, model: &Model) -> u64 {
        match self {
            Type::Bool => 2,
            Type::Int { lo, hi } => (hi - lo + 1) as u64,
            Type::Enum(e) => model.enums[e].literals.len() as u64,
        }
    }

    /// Smallest value of the encoded domain.
    pub fn min(self) -> i64 {
        match self {
            Type::Int { lo, .. } => lo,
            _ => 0,
        }
    }

    pub fn max(self, model: &Model) -> i64 {
        match self {
            Type::Bool => 1,
            Type::Int { hi, .. } => hi,
            Type::Enum(e) => model.enums[e].literals.len() as i64 - 1,
        }
    }

    pub fn contains(self, model: &Model, v: i64) -> bool {
        v >= self.min() && v <= self.max(model)
    }
}

/// Type shape used during checking: integers of any range are compatible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Bool,
    Int,
    Enum(EnumId),
}

impl From<Type> for Sort {
    fn from(t: Type) -> Sort {
        match t {
            Type::Bool => Sort::Bool,
            Type::Int { .. } => Sort::Int,
            Type::Enum(e) => Sort::Enum(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Enum(EnumId, u32),
    Var(VarId),
    Alg(AlgId),
    Loc(AutId, LocId),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn and(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Bool(true), _) => b,
            (_, Expr::Bool(true)) => a,
            _ => Expr::Bin(BinOp::And, Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Bool(false), _) => b,
            (_, Expr::Bool(false)) => a,
            _ => Expr::Bin(BinOp::Or, Box::new(a), Box::new(b)),
        }
    }

    pub fn not(a: Expr) -> Expr {
        match a {
            Expr::Bool(b) => Expr::Bool(!b),
            _ => Expr::Not(Box::new(a)),
        }
    }

    pub fn conjunction(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().fold(Expr::Bool(true), Expr::and)
    }

    pub fn disjunction(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().fold(Expr::Bool(false), Expr::or)
    }

    /// Calls `f` on every node, parents first.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Not(a) | Expr::Neg(a) => a.visit(f),
            Expr::Bin(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::If(c, t, e) => {
                c.visit(f);
                t.visit(f);
                e.visit(f);
            }
            _ => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumType {
    pub name: String,
    pub literals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarInit {
    Value(i64),
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub owner: AutId,
    pub ty: Type,
    pub init: VarInit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alg {
    pub name: String,
    pub ty: Type,
    pub def: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Plant,
    Requirement,
    Supervisor,
}

impl From<ast::AutomatonKind> for Kind {
    fn from(k: ast::AutomatonKind) -> Kind {
        match k {
            ast::AutomatonKind::Plant => Kind::Plant,
            ast::AutomatonKind::Requirement => Kind::Requirement,
            ast::AutomatonKind::Supervisor => Kind::Supervisor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub name: Option<String>,
    /// `None` when the location is not initial.
    pub initial: Option<Expr>,
    pub marked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: LocId,
    pub event: EventId,
    pub guard: Expr,
    pub updates: Vec<(VarId, Expr)>,
    pub target: LocId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub name: String,
    pub kind: Kind,
    pub locations: Vec<Location>,
    pub edges: Vec<Edge>,
    pub vars: Vec<VarId>,
    /// Sorted event ids this automaton synchronizes on.
    pub alphabet: Vec<EventId>,
    /// Sorted subset of the alphabet that is only tracked, never blocked.
    pub monitor: Vec<EventId>,
}

impl Automaton {
    pub fn has_event(&self, e: EventId) -> bool {
        self.alphabet.binary_search(&e).is_ok()
    }

    pub fn monitors(&self, e: EventId) -> bool {
        self.monitor.binary_search(&e).is_ok()
    }

    pub fn location_index(&self, name: &str) -> Option<LocId> {
        self.locations
            .iter()
            .position(|l| l.name.as_deref() == Some(name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Requirement {
    Invariant(Expr),
    Needs { event: EventId, condition: Expr },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub enums: Vec<EnumType>,
    pub events: Vec<Event>,
    pub automata: Vec<Automaton>,
    pub vars: Vec<Var>,
    pub algs: Vec<Alg>,
    pub plant_invariants: Vec<Expr>,
    pub requirements: Vec<Requirement>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("arithmetic overflow evaluating {0}")]
    Overflow(String),
    #[error("value {value} out of range for {var}")]
    OutOfRange { var: String, value: i64 },
}

impl Model {
    /// Index of a state vector slot: automata locations first, then variables.
    pub fn var_slot(&self, v: VarId) -> usize {
        self.automata.len() + v
    }

    pub fn state_len(&self) -> usize {
        self.automata.len() + self.vars.len()
    }

    pub fn automaton(&self, name: &str) -> Option<AutId> {
        self.automata.iter().position(|a| a.name == name)
    }

    pub fn event(&self, name: &str) -> Option<EventId> {
        self.events.iter().position(|e| e.name == name)
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn alg(&self, name: &str) -> Option<AlgId> {
        self.algs.iter().position(|a| a.name == name)
    }

    /// Qualified name of location `l` of automaton `a`.
    pub fn location_name(&self, a: AutId, l: LocId) -> String {
        let aut = &self.automata[a];
        match &aut.locations[l].name {
            Some(n) => format!("{}.{n}", aut.name),
            None => format!("{}.<loc{l}>", aut.name),
        }
    }

    /// Evaluates `e` over a state vector. Booleans are 0/1, enum values their literal index.
    pub fn eval(&self, e: &Expr, state: &[i32]) -> Result<i64, EvalError> {
        Ok(match e {
            Expr::Bool(b) => *b as i64,
            Expr::Int(n) => *n,
            Expr::Enum(_, i) => *i as i64,
            Expr::Var(v) => state[self.var_slot(*v)] as i64,
            Expr::Alg(a) => self.eval(&self.algs[*a].def, state)?,
            Expr::Loc(a, l) => (state[*a] as usize == *l) as i64,
            Expr::Not(x) => (self.eval(x, state)? == 0) as i64,
            Expr::Neg(x) => self
                .eval(x, state)?
                .checked_neg()
                .ok_or_else(|| EvalError::Overflow(self.display(e).to_string()))?,
            Expr::If(c, t, f) => {
                if self.eval(c, state)? != 0 {
                    self.eval(t, state)?
                } else {
                    self.eval(f, state)?
                }
            }
            Expr::Bin(op, a, b) => {
                let x = self.eval(a, state)?;
                match op {
                    BinOp::And if x == 0 => return Ok(0),
                    BinOp::Or if x != 0 => return Ok(1),
                    BinOp::Implies if x == 0 => return Ok(1),
                    _ => {}
                }
                let y = self.eval(b, state)?;
                let overflow = || EvalError::Overflow(self.display(e).to_string());
                match op {
                    BinOp::And | BinOp::Or | BinOp::Implies => (y != 0) as i64,
                    BinOp::Iff => ((x != 0) == (y != 0)) as i64,
                    BinOp::Eq => (x == y) as i64,
                    BinOp::Ne => (x != y) as i64,
                    BinOp::Lt => (x < y) as i64,
                    BinOp::Le => (x <= y) as i64,
                    BinOp::Gt => (x > y) as i64,
                    BinOp::Ge => (x >= y) as i64,
                    BinOp::Add => x.checked_add(y).ok_or_else(overflow)?,
                    BinOp::Sub => x.checked_sub(y).ok_or_else(overflow)?,
                    BinOp::Mul => x.checked_mul(y).ok_or_else(overflow)?,
                }
            }
        })
    }

    pub fn holds(&self, e: &Expr, state: &[i32]) -> Result<bool, EvalError> {
        Ok(self.eval(e, state)? != 0)
    }

    /// Replaces every algebraic variable by its definition.
    pub fn inline_algs(&self, e: &Expr) -> Expr {
        match e {
            Expr::Alg(a) => self.inline_algs(&self.algs[*a].def),
            Expr::Not(x) => Expr::Not(Box::new(self.inline_algs(x))),
            Expr::Neg(x) => Expr::Neg(Box::new(self.inline_algs(x))),
            Expr::Bin(op, a, b) => Expr::Bin(
                *op,
                Box::new(self.inline_algs(a)),
                Box::new(self.inline_algs(b)),
            ),
            Expr::If(c, t, f) => Expr::If(
                Box::new(self.inline_algs(c)),
                Box::new(self.inline_algs(t)),
                Box::new(self.inline_algs(f)),
            ),
            other => other.clone(),
        }
    }

    /// Converts back to surface syntax with qualified names.
    pub fn to_ast(&self, e: &Expr) -> ast::Expr {
        let name = |s: String| ast::Expr::Name(Path(s.split('.').map(str::to_string).collect()), Default::default());
        let wrap = |inner: ast::Expr, min: u8| {
            if inner.precedence() < min {
                ast::Expr::paren(inner)
            } else {
                inner
            }
        };
        match e {
            Expr::Bool(b) => ast::Expr::Bool(*b),
            Expr::Int(n) => ast::Expr::Int(*n),
            Expr::Enum(en, i) => name(self.enums[*en].literals[*i as usize].clone()),
            Expr::Var(v) => name(self.vars[*v].name.clone()),
            Expr::Alg(a) => name(self.algs[*a].name.clone()),
            Expr::Loc(a, l) => name(self.location_name(*a, *l)),
            Expr::Not(x) => {
                let inner = self.to_ast(x);
                let inner = if inner.precedence() < ast::UNARY_PRECEDENCE {
                    ast::Expr::paren(inner)
                } else {
                    inner
                };
                ast::Expr::not(inner)
            }
            Expr::Neg(x) => ast::Expr::Unary(
                ast::UnOp::Neg,
                Box::new(wrap(self.to_ast(x), ast::UNARY_PRECEDENCE)),
            ),
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                let (lmin, rmin) = if op.right_associative() {
                    (p + 1, p)
                } else {
                    (p, p + 1)
                };
                ast::Expr::bin(*op, wrap(self.to_ast(a), lmin), wrap(self.to_ast(b), rmin))
            }
            Expr::If(c, t, f) => ast::Expr::If(
                Box::new(self.to_ast(c)),
                Box::new(self.to_ast(t)),
                Box::new(self.to_ast(f)),
            ),
        }
    }

    pub fn display<'a>(&'a self, e: &'a Expr) -> ExprDisplay<'a> {
        ExprDisplay { model: self, expr: e }
    }

    /// Describes a state vector as `name=value` pairs.
    pub fn describe_state(&self, state: &[i32]) -> String {
        let mut parts = Vec::with_capacity(state.len());
        for (a, aut) in self.automata.iter().enumerate() {
            if aut.locations.len() > 1 {
                parts.push(format!(
                    "{}={}",
                    aut.name,
                    aut.locations[state[a] as usize]
                        .name
                        .as_deref()
                        .unwrap_or("*")
                ));
            }
        }
        for (v, var) in self.vars.iter().enumerate() {
            let raw = state[self.var_slot(v)] as i64;
            let value = match var.ty {
                Type::Bool => (raw != 0).to_string(),
                Type::Int { .. } => raw.to_string(),
                Type::Enum(e) => self.enums[e].literals[raw as usize].clone(),
            };
            parts.push(format!("{}={value}", var.name));
        }
        parts.join(", ")
    }

    pub fn controllable_events(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len()).filter(|&e| self.events[e].controllable)
    }

    /// Product of all automaton location counts and variable domain sizes.
    pub fn worst_case_size(&self) -> num_bigint::BigUint {
        let locs = self.automata.iter().map(|a| a.locations.len() as u64);
        let vars = self.vars.iter().map(|v| v.ty.domain_size(self));
        locs.chain(vars).map(num_bigint::BigUint::from).product()
    }
}

pub struct ExprDisplay<'a> {
    model: &'a Model,
    expr: &'a Expr,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(&self.model.to_ast(self.expr)))
    }
}
