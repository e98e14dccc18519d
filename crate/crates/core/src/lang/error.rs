use std::fmt;

use thiserror::Error;

use super::source::Position;

/// Where a diagnostic points. `None` for whole-specification problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct At(pub Option<Position>);

impl fmt::Display for At {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(p) => write!(f, "{p}: "),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolveKind {
    UnknownName,
    Arity,
    TypeMismatch,
    CyclicAlgebraic,
    Duplicate,
    NonLocalWrite,
    Range,
    Unsupported,
    Structure,
}

impl fmt::Display for ResolveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResolveKind::UnknownName => "unknown name",
            ResolveKind::Arity => "arity mismatch",
            ResolveKind::TypeMismatch => "type mismatch",
            ResolveKind::CyclicAlgebraic => "cyclic algebraic variable",
            ResolveKind::Duplicate => "duplicate declaration",
            ResolveKind::NonLocalWrite => "non-local write",
            ResolveKind::Range => "value out of range",
            ResolveKind::Unsupported => "unsupported construct",
            ResolveKind::Structure => "malformed declaration",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LangError {
    #[error("{at}illegal character {ch:?}")]
    Lexical { at: At, ch: char },

    #[error("{at}syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        at: At,
        expected: Vec<String>,
        found: String,
    },

    #[error("{at}unsupported construct `{what}`")]
    Unsupported { at: At, what: String },

    #[error("{at}{kind}: {message}")]
    Resolve {
        at: At,
        kind: ResolveKind,
        message: String,
    },

    #[error("no declarations")]
    Empty,
}

impl LangError {
    pub fn resolve_kind(&self) -> Option<ResolveKind> {
        match self {
            LangError::Resolve { kind, .. } => Some(*kind),
            _ => None,
        }
    }

    pub fn position(&self) -> Option<&Position> {
        match self {
            LangError::Lexical { at, .. }
            | LangError::Syntax { at, .. }
            | LangError::Unsupported { at, .. }
            | LangError::Resolve { at, .. } => at.0.as_ref(),
            LangError::Empty => None,
        }
    }
}
