//! Recursive-descent parser producing a [`SourceSpec`].

use super::ast::*;
use super::error::{At, LangError};
use super::lexer::{tokenize, Keyword, Symbol, Token, TokenKind};
use super::source::{Position, SourceFile, Span};

/// Parses one source text into a specification holding that single file.
pub fn parse_source(name: &str, text: &str) -> Result<SourceSpec, LangError> {
    let file = SourceFile::new(name, text);
    let tokens = tokenize(&file, 0)?;
    let mut spec = parse(&tokens, &file)?;
    spec.files.push(file);
    Ok(spec)
}

/// Parses several files as one model, in order.
pub fn parse_sources<'a>(
    inputs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<SourceSpec, LangError> {
    let mut spec = SourceSpec::default();
    for (name, text) in inputs {
        spec.merge(parse_source(name, text)?);
    }
    Ok(spec)
}

/// Parses a token stream. Spans refer to `file`; the file itself is not stored.
pub fn parse(tokens: &[Token], file: &SourceFile) -> Result<SourceSpec, LangError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        file,
    };
    let mut spec = SourceSpec::default();
    while !p.at_end() {
        let start = p.span();
        let decl = p.declaration()?;
        spec.push(decl, start.to(p.prev_span()));
    }
    Ok(spec)
}

/// Parses a standalone expression.
pub fn parse_expr(text: &str) -> Result<Expr, LangError> {
    let file = SourceFile::new("<expr>", text);
    let tokens = tokenize(&file, 0)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        file: &file,
    };
    let e = p.expr()?;
    if !p.at_end() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    file: &'a SourceFile,
}

type PResult<T> = Result<T, LangError>;

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + n).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => {
                let end = self.file.text.len();
                let file = self.tokens.first().map_or(0, |t| t.span.file);
                Span::new(file, end, end)
            }
        }
    }

    fn prev_span(&self) -> Span {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map_or_else(|| self.span(), |t| t.span)
    }

    fn unexpected(&self, expected: &[&str]) -> LangError {
        let span = self.span();
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), |k| k.to_string());
        let (line, col) = self.file.line_col(span.start as usize);
        LangError::Syntax {
            at: At(Some(Position {
                file: self.file.name.clone(),
                line,
                col,
            })),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn unsupported(&self, what: &str) -> LangError {
        let (line, col) = self.file.line_col(self.span().start as usize);
        LangError::Unsupported {
            at: At(Some(Position {
                file: self.file.name.clone(),
                line,
                col,
            })),
            what: what.to_string(),
        }
    }

    fn is_kw(&self, kw: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Keyword(kw))
    }

    fn is_sym(&self, sym: Symbol) -> bool {
        self.peek() == Some(&TokenKind::Symbol(sym))
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Some(TokenKind::Ident(s)) if s == word)
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        let hit = self.is_kw(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_sym(&mut self, sym: Symbol) -> bool {
        let hit = self.is_sym(sym);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_kw(&mut self, kw: Keyword) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("kw:{}", kw.as_str())]))
        }
    }

    fn expect_sym(&mut self, sym: Symbol) -> PResult<()> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&[sym.as_str()]))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(TokenKind::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn int_literal(&mut self) -> PResult<i64> {
        let neg = self.eat_sym(Symbol::Minus);
        match self.peek() {
            Some(TokenKind::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.unexpected(&["integer literal"])),
        }
    }

    fn path(&mut self) -> PResult<Path> {
        let mut parts = vec![self.ident()?];
        while self.is_sym(Symbol::Dot) && matches!(self.peek_at(1), Some(TokenKind::Ident(_))) {
            self.pos += 1;
            parts.push(self.ident()?);
        }
        Ok(Path(parts))
    }

    fn path_list(&mut self) -> PResult<Vec<Path>> {
        let mut out = vec![self.path()?];
        while self.eat_sym(Symbol::Comma) {
            out.push(self.path()?);
        }
        Ok(out)
    }

    fn ident_list(&mut self) -> PResult<Vec<String>> {
        let mut out = vec![self.ident()?];
        while self.eat_sym(Symbol::Comma) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    // Declarations.

    fn declaration(&mut self) -> PResult<Declaration> {
        match self.peek() {
            Some(TokenKind::Keyword(Keyword::Enum)) => self.enum_decl(),
            Some(TokenKind::Keyword(Keyword::Controllable | Keyword::Uncontrollable)) => {
                Ok(Declaration::Events(self.event_group()?))
            }
            Some(TokenKind::Keyword(Keyword::Alg)) => Ok(Declaration::Alg(self.alg_decl()?)),
            Some(TokenKind::Keyword(Keyword::Plant)) => {
                self.pos += 1;
                self.kinded(AutomatonKind::Plant)
            }
            Some(TokenKind::Keyword(Keyword::Requirement)) => {
                self.pos += 1;
                self.kinded(AutomatonKind::Requirement)
            }
            Some(TokenKind::Keyword(Keyword::Supervisor)) => {
                self.pos += 1;
                self.kinded(AutomatonKind::Supervisor)
            }
            Some(TokenKind::Keyword(Keyword::Automaton)) => {
                Err(self.unsupported("automaton without plant/requirement/supervisor kind"))
            }
            Some(TokenKind::Ident(w))
                if w == "featuremodel" && matches!(self.peek_at(1), Some(TokenKind::Ident(_))) =>
            {
                self.pos += 1;
                Ok(Declaration::FeatureModel(self.feature_model()?))
            }
            Some(TokenKind::Ident(_)) if self.peek_at(1) == Some(&TokenKind::Symbol(Symbol::Colon)) => {
                self.instance()
            }
            Some(TokenKind::Keyword(Keyword::Disc)) => {
                Err(self.unsupported("discrete variable outside an automaton"))
            }
            _ => Err(self.unexpected(&[
                "kw:enum",
                "kw:controllable",
                "kw:uncontrollable",
                "kw:alg",
                "kw:plant",
                "kw:requirement",
                "kw:supervisor",
                "instantiation",
            ])),
        }
    }

    fn enum_decl(&mut self) -> PResult<Declaration> {
        self.expect_kw(Keyword::Enum)?;
        let name = self.ident()?;
        self.expect_sym(Symbol::Eq)?;
        let literals = self.ident_list()?;
        self.expect_sym(Symbol::Semi)?;
        Ok(Declaration::Enum { name, literals })
    }

    fn event_group(&mut self) -> PResult<EventGroup> {
        let controllable = if self.eat_kw(Keyword::Controllable) {
            true
        } else {
            self.expect_kw(Keyword::Uncontrollable)?;
            false
        };
        let names = self.ident_list()?;
        self.expect_sym(Symbol::Semi)?;
        Ok(EventGroup {
            controllable,
            names,
        })
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        if self.eat_kw(Keyword::Bool) {
            return Ok(TypeExpr::Bool);
        }
        if self.eat_kw(Keyword::Int) {
            if self.eat_sym(Symbol::LBracket) {
                let lo = self.int_literal()?;
                self.expect_sym(Symbol::DotDot)?;
                let hi = self.int_literal()?;
                self.expect_sym(Symbol::RBracket)?;
                return Ok(TypeExpr::Int(Some((lo, hi))));
            }
            return Ok(TypeExpr::Int(None));
        }
        match self.peek() {
            Some(TokenKind::Ident(_)) => Ok(TypeExpr::Named(self.ident()?)),
            _ => Err(self.unexpected(&["kw:bool", "kw:int", "enumeration name"])),
        }
    }

    fn alg_decl(&mut self) -> PResult<AlgDecl> {
        self.expect_kw(Keyword::Alg)?;
        let ty = self.type_expr()?;
        let name = self.ident()?;
        self.expect_sym(Symbol::Eq)?;
        let value = self.expr()?;
        self.expect_sym(Symbol::Semi)?;
        Ok(AlgDecl { ty, name, value })
    }

    /// Everything after `plant`, `requirement` or `supervisor`.
    fn kinded(&mut self, kind: AutomatonKind) -> PResult<Declaration> {
        if self.eat_kw(Keyword::Automaton) {
            let name = self.ident()?;
            self.expect_sym(Symbol::Colon)?;
            let body = self.automaton_body()?;
            return Ok(Declaration::Automaton { kind, name, body });
        }
        if self.eat_kw(Keyword::Def) {
            let name = self.ident()?;
            self.expect_sym(Symbol::LParen)?;
            let mut params = Vec::new();
            if !self.is_sym(Symbol::RParen) {
                loop {
                    self.expect_kw(Keyword::Alg)?;
                    let ty = self.type_expr()?;
                    let pname = self.ident()?;
                    params.push(Param { ty, name: pname });
                    if !self.eat_sym(Symbol::Comma) {
                        break;
                    }
                }
            }
            self.expect_sym(Symbol::RParen)?;
            self.expect_sym(Symbol::Colon)?;
            let body = self.automaton_body()?;
            return Ok(Declaration::AutomatonDef {
                kind,
                name,
                params,
                body,
            });
        }
        if matches!(self.peek(), Some(TokenKind::Ident(_)))
            && self.peek_at(1) == Some(&TokenKind::Symbol(Symbol::Colon))
        {
            let name = self.ident()?;
            self.pos += 1;
            let body = self.automaton_body()?;
            return Ok(Declaration::Automaton { kind, name, body });
        }
        if self.eat_kw(Keyword::Invariant) {
            let e = self.expr()?;
            self.expect_sym(Symbol::Semi)?;
            return Ok(match kind {
                AutomatonKind::Plant => Declaration::PlantInvariant(e),
                AutomatonKind::Requirement => {
                    Declaration::Requirement(RequirementForm::Invariant(e))
                }
                AutomatonKind::Supervisor => return Err(self.unsupported("supervisor invariant")),
            });
        }
        if kind != AutomatonKind::Requirement {
            return Err(self.unexpected(&["kw:automaton", "kw:def", "kw:invariant", "identifier"]));
        }
        let e = self.expr()?;
        let form = if self.eat_kw(Keyword::Needs) {
            let event = match e {
                Expr::Name(p, _) => p,
                _ => return Err(self.unexpected(&["event name before kw:needs"])),
            };
            let condition = self.expr()?;
            RequirementForm::Needs { event, condition }
        } else {
            RequirementForm::Invariant(e)
        };
        self.expect_sym(Symbol::Semi)?;
        Ok(Declaration::Requirement(form))
    }

    fn instance(&mut self) -> PResult<Declaration> {
        let name = self.ident()?;
        self.expect_sym(Symbol::Colon)?;
        let definition = self.ident()?;
        self.expect_sym(Symbol::LParen)?;
        let mut args = Vec::new();
        if !self.is_sym(Symbol::RParen) {
            args.push(self.expr()?);
            while self.eat_sym(Symbol::Comma) {
                args.push(self.expr()?);
            }
        }
        self.expect_sym(Symbol::RParen)?;
        self.expect_sym(Symbol::Semi)?;
        Ok(Declaration::Instance {
            name,
            definition,
            args,
        })
    }

    fn automaton_body(&mut self) -> PResult<AutomatonBody> {
        let mut body = AutomatonBody::default();
        loop {
            match self.peek() {
                Some(TokenKind::Keyword(Keyword::Controllable | Keyword::Uncontrollable)) => {
                    body.events.push(self.event_group()?)
                }
                Some(TokenKind::Keyword(Keyword::Disc)) => body.discs.push(self.disc_decl()?),
                Some(TokenKind::Keyword(Keyword::Alg)) => body.algs.push(self.alg_decl()?),
                Some(TokenKind::Keyword(Keyword::Monitor)) => {
                    self.pos += 1;
                    let list = if self.is_sym(Symbol::Semi) {
                        Vec::new()
                    } else {
                        self.path_list()?
                    };
                    self.expect_sym(Symbol::Semi)?;
                    body.monitor.get_or_insert_with(Vec::new).extend(list);
                }
                Some(TokenKind::Ident(w)) if w == "alphabet" => {
                    self.pos += 1;
                    let list = if self.is_sym(Symbol::Semi) {
                        Vec::new()
                    } else {
                        self.path_list()?
                    };
                    self.expect_sym(Symbol::Semi)?;
                    body.alphabet.get_or_insert_with(Vec::new).extend(list);
                }
                Some(TokenKind::Keyword(Keyword::Location)) => {
                    body.locations.push(self.location()?)
                }
                Some(TokenKind::Keyword(Keyword::End)) => {
                    self.pos += 1;
                    return Ok(body);
                }
                Some(TokenKind::Keyword(Keyword::Invariant)) => {
                    return Err(self.unsupported("invariant inside an automaton"))
                }
                _ => {
                    return Err(self.unexpected(&[
                        "kw:controllable",
                        "kw:uncontrollable",
                        "kw:disc",
                        "kw:alg",
                        "kw:monitor",
                        "alphabet",
                        "kw:location",
                        "kw:end",
                    ]))
                }
            }
        }
    }

    fn disc_decl(&mut self) -> PResult<DiscDecl> {
        self.expect_kw(Keyword::Disc)?;
        let ty = self.type_expr()?;
        let name = self.ident()?;
        let init = if self.eat_sym(Symbol::Eq) {
            DiscInit::Value(self.expr()?)
        } else if self.eat_kw(Keyword::In) {
            self.expect_kw(Keyword::Any)?;
            DiscInit::Any
        } else {
            DiscInit::Default
        };
        self.expect_sym(Symbol::Semi)?;
        Ok(DiscDecl { ty, name, init })
    }

    fn location(&mut self) -> PResult<LocationDecl> {
        let start = self.span();
        self.expect_kw(Keyword::Location)?;
        let name = match self.peek() {
            Some(TokenKind::Ident(_)) => Some(self.ident()?),
            _ => None,
        };
        let mut loc = LocationDecl {
            name,
            initial: None,
            marked: false,
            edges: Vec::new(),
            span: start,
        };
        if self.eat_sym(Symbol::Semi) {
            loc.span = start.to(self.prev_span());
            return Ok(loc);
        }
        self.expect_sym(Symbol::Colon)?;
        loop {
            if self.eat_kw(Keyword::Initial) {
                if self.eat_sym(Symbol::Semi) {
                    loc.initial = Some(None);
                } else {
                    let e = self.expr()?;
                    self.expect_sym(Symbol::Semi)?;
                    loc.initial = Some(Some(e));
                }
            } else if self.eat_kw(Keyword::Marked) {
                if !self.is_sym(Symbol::Semi) {
                    return Err(self.unsupported("marked predicate"));
                }
                self.pos += 1;
                loc.marked = true;
            } else if self.is_kw(Keyword::Edge) {
                loc.edges.push(self.edge()?);
            } else {
                break;
            }
        }
        loc.span = start.to(self.prev_span());
        Ok(loc)
    }

    fn edge(&mut self) -> PResult<EdgeDecl> {
        let start = self.span();
        self.expect_kw(Keyword::Edge)?;
        let events = self.path_list()?;
        let guard = if self.eat_kw(Keyword::When) {
            Some(self.expr()?)
        } else {
            None
        };
        let mut updates = Vec::new();
        if self.eat_kw(Keyword::Do) {
            loop {
                let var = self.ident()?;
                if self.is_sym(Symbol::Dot) {
                    return Err(self.unsupported("assignment to a non-local variable"));
                }
                self.expect_sym(Symbol::Assign)?;
                updates.push((var, self.expr()?));
                if !self.eat_sym(Symbol::Comma) {
                    break;
                }
            }
        }
        let target = if self.eat_kw(Keyword::Goto) {
            Some(self.ident()?)
        } else {
            None
        };
        self.expect_sym(Symbol::Semi)?;
        Ok(EdgeDecl {
            events,
            guard,
            updates,
            target,
            span: start.to(self.prev_span()),
        })
    }

    // Compact feature-model block.

    fn feature_model(&mut self) -> PResult<FeatureModelDecl> {
        let mut fm = FeatureModelDecl {
            name: self.ident()?,
            ..Default::default()
        };
        self.expect_sym(Symbol::Colon)?;
        loop {
            if self.eat_kw(Keyword::End) {
                return Ok(fm);
            }
            if self.eat_kw(Keyword::Invariant) {
                fm.invariants.push(self.expr()?);
                self.expect_sym(Symbol::Semi)?;
                continue;
            }
            let word = match self.peek() {
                Some(TokenKind::Ident(w)) => w.clone(),
                Some(TokenKind::Keyword(Keyword::Or)) => "or".to_string(),
                _ => return Err(self.unexpected(&["feature-model clause", "kw:end"])),
            };
            self.pos += 1;
            if let Some(kind) = RelationKind::from_word(&word) {
                let parent = self.ident()?;
                let children = if kind == RelationKind::Root {
                    Vec::new()
                } else {
                    self.expect_sym(Symbol::Colon)?;
                    self.ident_list()?
                };
                fm.relations.push(RelationDecl {
                    kind,
                    parent,
                    children,
                });
                self.expect_sym(Symbol::Semi)?;
                continue;
            }
            match word.as_str() {
                "feature" => fm.features.extend(self.ident_list()?),
                "attribute" => {
                    let ty = self.type_expr()?;
                    if !matches!(ty, TypeExpr::Int(_)) {
                        return Err(self.unsupported("non-integer feature attribute"));
                    }
                    let name = self.ident()?;
                    let aggregate = match self.peek() {
                        Some(TokenKind::Ident(_)) => Some(self.ident()?),
                        _ => None,
                    };
                    self.expect_sym(Symbol::Colon)?;
                    let mut values = Vec::new();
                    loop {
                        let f = self.ident()?;
                        self.expect_sym(Symbol::Eq)?;
                        values.push((f, self.int_literal()?));
                        if !self.eat_sym(Symbol::Comma) {
                            break;
                        }
                    }
                    fm.attributes.push(AttributeDecl {
                        name,
                        aggregate,
                        values,
                    });
                }
                "constraint" => {
                    let name = self.ident()?;
                    self.expect_sym(Symbol::Eq)?;
                    fm.constraints.push((name, self.expr()?));
                }
                "static" => fm.modes.push(ModeDecl::Static),
                "dynamic" => {
                    let controllable = if self.eat_kw(Keyword::Controllable) {
                        true
                    } else {
                        self.expect_kw(Keyword::Uncontrollable)?;
                        false
                    };
                    let features = if self.eat_sym(Symbol::LBracket) {
                        let l = self.ident_list()?;
                        self.expect_sym(Symbol::RBracket)?;
                        l
                    } else {
                        Vec::new()
                    };
                    fm.modes.push(ModeDecl::Dynamic {
                        controllable,
                        features,
                    });
                }
                "swap" => {
                    let controllable = if self.eat_kw(Keyword::Controllable) {
                        true
                    } else {
                        self.expect_kw(Keyword::Uncontrollable)?;
                        false
                    };
                    let event = self.ident()?;
                    self.expect_sym(Symbol::Colon)?;
                    let members = self.ident_list()?;
                    fm.swaps.push(SwapDecl {
                        controllable,
                        event,
                        members,
                    });
                }
                "strict" => fm.strictness = Some(StrictnessDecl::Strict),
                "relaxed" => fm.strictness = Some(StrictnessDecl::Relaxed),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected(&["feature-model clause", "kw:end"]));
                }
            }
            self.expect_sym(Symbol::Semi)?;
        }
    }

    // Expressions, loosest first.

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.implies()?;
        while self.eat_sym(Symbol::Iff) {
            let rhs = self.implies()?;
            lhs = Expr::bin(BinOp::Iff, lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> PResult<Expr> {
        let lhs = self.or()?;
        if self.eat_sym(Symbol::Implies) {
            let rhs = self.implies()?;
            return Ok(Expr::bin(BinOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Expr> {
        let mut lhs = self.and()?;
        while self.eat_kw(Keyword::Or) {
            let rhs = self.and()?;
            lhs = Expr::bin(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Expr> {
        let mut lhs = self.comparison()?;
        while self.eat_kw(Keyword::And) {
            let rhs = self.comparison()?;
            lhs = Expr::bin(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let mut lhs = self.additive()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Symbol(Symbol::Eq)) => BinOp::Eq,
                Some(TokenKind::Symbol(Symbol::Ne)) => BinOp::Ne,
                Some(TokenKind::Symbol(Symbol::Lt)) => BinOp::Lt,
                Some(TokenKind::Symbol(Symbol::Le)) => BinOp::Le,
                Some(TokenKind::Symbol(Symbol::Gt)) => BinOp::Gt,
                Some(TokenKind::Symbol(Symbol::Ge)) => BinOp::Ge,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.additive()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = if self.eat_sym(Symbol::Plus) {
                BinOp::Add
            } else if self.eat_sym(Symbol::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.multiplicative()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while self.eat_sym(Symbol::Star) {
            let rhs = self.unary()?;
            lhs = Expr::bin(BinOp::Mul, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_kw(Keyword::Not) {
            return Ok(Expr::not(self.unary()?));
        }
        if self.eat_sym(Symbol::Minus) {
            if let Some(TokenKind::Int(n)) = self.peek() {
                let n = *n;
                self.pos += 1;
                return Ok(Expr::Int(-n));
            }
            return Ok(Expr::Unary(UnOp::Neg, Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(TokenKind::Keyword(Keyword::True)) => {
                self.pos += 1;
                Ok(Expr::Bool(true))
            }
            Some(TokenKind::Keyword(Keyword::False)) => {
                self.pos += 1;
                Ok(Expr::Bool(false))
            }
            Some(TokenKind::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(TokenKind::Ident(_)) => {
                let start = self.span();
                let p = self.path()?;
                if self.is_sym(Symbol::LParen) {
                    return Err(self.unsupported("function call"));
                }
                Ok(Expr::Name(p, start.to(self.prev_span())))
            }
            Some(TokenKind::Symbol(Symbol::LParen)) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(Symbol::RParen)?;
                Ok(Expr::paren(e))
            }
            Some(TokenKind::Keyword(Keyword::If)) => {
                self.pos += 1;
                let cond = self.expr()?;
                self.expect_sym(Symbol::Colon)?;
                let then = self.expr()?;
                if self.is_word("elif") {
                    return Err(self.unsupported("elif"));
                }
                self.expect_kw(Keyword::Else)?;
                let otherwise = self.expr()?;
                self.expect_kw(Keyword::End)?;
                Ok(Expr::If(Box::new(cond), Box::new(then), Box::new(otherwise)))
            }
            _ => Err(self.unexpected(&[
                "kw:true",
                "kw:false",
                "integer literal",
                "identifier",
                "(",
                "kw:if",
                "kw:not",
                "-",
            ])),
        }
    }
}
