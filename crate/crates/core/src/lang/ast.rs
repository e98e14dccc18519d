//! Surface syntax tree, as parsed. Names are unresolved.

use super::source::{SourceFile, Span};

#[derive(Clone, Debug, Default)]
pub struct SourceSpec {
    pub declarations: Vec<Declaration>,
    /// Span of each declaration, parallel to `declarations`.
    pub spans: Vec<Span>,
    pub files: Vec<SourceFile>,
}

impl SourceSpec {
    pub fn push(&mut self, decl: Declaration, span: Span) {
        self.declarations.push(decl);
        self.spans.push(span);
    }

    /// Appends `other`, renumbering its file indices.
    pub fn merge(&mut self, other: SourceSpec) {
        let offset = self.files.len() as u32;
        self.files.extend(other.files);
        for (decl, mut span) in other.declarations.into_iter().zip(other.spans) {
            span.file += offset;
            self.push(decl, span);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutomatonKind {
    Plant,
    Requirement,
    Supervisor,
}

impl AutomatonKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AutomatonKind::Plant => "plant",
            AutomatonKind::Requirement => "requirement",
            AutomatonKind::Supervisor => "supervisor",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Declaration {
    Enum {
        name: String,
        literals: Vec<String>,
    },
    Events(EventGroup),
    Alg(AlgDecl),
    AutomatonDef {
        kind: AutomatonKind,
        name: String,
        params: Vec<Param>,
        body: AutomatonBody,
    },
    Automaton {
        kind: AutomatonKind,
        name: String,
        body: AutomatonBody,
    },
    Instance {
        name: String,
        definition: String,
        args: Vec<Expr>,
    },
    PlantInvariant(Expr),
    Requirement(RequirementForm),
    FeatureModel(FeatureModelDecl),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventGroup {
    pub controllable: bool,
    pub names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub ty: TypeExpr,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TypeExpr {
    Bool,
    /// `int` or `int[lo..hi]`.
    Int(Option<(i64, i64)>),
    Named(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgDecl {
    pub ty: TypeExpr,
    pub name: String,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RequirementForm {
    Invariant(Expr),
    Needs { event: Path, condition: Expr },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AutomatonBody {
    pub events: Vec<EventGroup>,
    pub discs: Vec<DiscDecl>,
    pub algs: Vec<AlgDecl>,
    /// `monitor;` is `Some(vec![])`: every event of the automaton is monitored.
    pub monitor: Option<Vec<Path>>,
    pub alphabet: Option<Vec<Path>>,
    pub locations: Vec<LocationDecl>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscDecl {
    pub ty: TypeExpr,
    pub name: String,
    pub init: DiscInit,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiscInit {
    Default,
    Value(Expr),
    Any,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocationDecl {
    pub name: Option<String>,
    /// `initial;` is `Some(None)`, `initial p;` is `Some(Some(p))`.
    pub initial: Option<Option<Expr>>,
    pub marked: bool,
    pub edges: Vec<EdgeDecl>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeDecl {
    pub events: Vec<Path>,
    pub guard: Option<Expr>,
    pub updates: Vec<(String, Expr)>,
    pub target: Option<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<String>);

impl Path {
    pub fn single(name: impl Into<String>) -> Path {
        Path(vec![name.into()])
    }

    pub fn dotted(a: impl Into<String>, b: impl Into<String>) -> Path {
        Path(vec![a.into(), b.into()])
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Iff,
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Iff => "<=>",
            BinOp::Implies => "=>",
            BinOp::Or => "or",
            BinOp::And => "and",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Iff => 1,
            BinOp::Implies => 2,
            BinOp::Or => 3,
            BinOp::And => 4,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 5,
            BinOp::Add | BinOp::Sub => 6,
            BinOp::Mul => 7,
        }
    }

    pub fn right_associative(self) -> bool {
        matches!(self, BinOp::Implies)
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 5
    }
}

pub const UNARY_PRECEDENCE: u8 = 8;
pub const ATOM_PRECEDENCE: u8 = 9;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Name(Path, Span),
    Paren(Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn name(path: &str) -> Expr {
        Expr::Name(
            Path(path.split('.').map(str::to_string).collect()),
            Span::default(),
        )
    }

    pub fn paren(e: Expr) -> Expr {
        Expr::Paren(Box::new(e))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Unary(UnOp::Not, Box::new(e))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Left-nested fold of `items` with `op`; `empty` when there are none.
    pub fn fold(op: BinOp, items: impl IntoIterator<Item = Expr>, empty: Expr) -> Expr {
        items
            .into_iter()
            .reduce(|a, b| Expr::bin(op, a, b))
            .unwrap_or(empty)
    }

    pub fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Unary(..) => UNARY_PRECEDENCE,
            _ => ATOM_PRECEDENCE,
        }
    }
}

// Compact feature-model block.

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureModelDecl {
    pub name: String,
    pub features: Vec<String>,
    pub relations: Vec<RelationDecl>,
    pub attributes: Vec<AttributeDecl>,
    pub constraints: Vec<(String, Expr)>,
    pub modes: Vec<ModeDecl>,
    pub swaps: Vec<SwapDecl>,
    pub strictness: Option<StrictnessDecl>,
    pub invariants: Vec<Expr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Root,
    Mandatory,
    Optional,
    Alternative,
    Or,
    Requires,
    Excludes,
}

impl RelationKind {
    pub fn word(self) -> &'static str {
        match self {
            RelationKind::Root => "root",
            RelationKind::Mandatory => "mandatory",
            RelationKind::Optional => "optional",
            RelationKind::Alternative => "alternative",
            RelationKind::Or => "or",
            RelationKind::Requires => "requires",
            RelationKind::Excludes => "excludes",
        }
    }

    pub fn from_word(w: &str) -> Option<RelationKind> {
        Some(match w {
            "root" => RelationKind::Root,
            "mandatory" => RelationKind::Mandatory,
            "optional" => RelationKind::Optional,
            "alternative" => RelationKind::Alternative,
            "or" => RelationKind::Or,
            "requires" => RelationKind::Requires,
            "excludes" => RelationKind::Excludes,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationDecl {
    pub kind: RelationKind,
    pub parent: String,
    pub children: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttributeDecl {
    pub name: String,
    pub aggregate: Option<String>,
    pub values: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModeDecl {
    Static,
    /// `dynamic [un]controllable [F1, F2];`; an empty list sets the default.
    Dynamic {
        controllable: bool,
        features: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwapDecl {
    pub controllable: bool,
    pub event: String,
    pub members: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrictnessDecl {
    Strict,
    Relaxed,
}
