//! Tokenizer for `.fsc` specifications.

use std::fmt;

use super::error::{At, LangError};
use super::source::{Position, SourceFile, Span};

macro_rules! keywords {
    ($($variant:ident => $text:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Keyword { $($variant),* }

        impl Keyword {
            pub const ALL: &'static [Keyword] = &[$(Keyword::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(Keyword::$variant => $text),* }
            }

            pub fn from_word(word: &str) -> Option<Keyword> {
                match word { $($text => Some(Keyword::$variant),)* _ => None }
            }
        }
    };
}

keywords! {
    Plant => "plant", Requirement => "requirement", Supervisor => "supervisor",
    Automaton => "automaton", Def => "def", End => "end", Location => "location",
    Edge => "edge", When => "when", Do => "do", Goto => "goto", Needs => "needs",
    Initial => "initial", Marked => "marked", Monitor => "monitor",
    Invariant => "invariant", Controllable => "controllable",
    Uncontrollable => "uncontrollable", Disc => "disc", Alg => "alg", Enum => "enum",
    Bool => "bool", Int => "int", True => "true", False => "false", Not => "not",
    And => "and", Or => "or", In => "in", Any => "any", If => "if", Else => "else",
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Iff,
    Implies,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Assign,
    Colon,
    Semi,
    Comma,
    Dot,
    DotDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Iff => "<=>",
            Symbol::Implies => "=>",
            Symbol::Eq => "=",
            Symbol::Ne => "!=",
            Symbol::Lt => "<",
            Symbol::Le => "<=",
            Symbol::Gt => ">",
            Symbol::Ge => ">=",
            Symbol::Plus => "+",
            Symbol::Minus => "-",
            Symbol::Star => "*",
            Symbol::Assign => ":=",
            Symbol::Colon => ":",
            Symbol::Semi => ";",
            Symbol::Comma => ",",
            Symbol::Dot => ".",
            Symbol::DotDot => "..",
            Symbol::LParen => "(",
            Symbol::RParen => ")",
            Symbol::LBracket => "[",
            Symbol::RBracket => "]",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    Int(i64),
    Symbol(Symbol),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "kw:{}", k.as_str()),
            TokenKind::Ident(s) => write!(f, "id:{s}"),
            TokenKind::Int(n) => write!(f, "lit:{n}"),
            TokenKind::Symbol(s) => f.write_str(s.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

// Longest match first.
const SYMBOLS: &[(&str, Symbol)] = &[
    ("<=>", Symbol::Iff),
    ("=>", Symbol::Implies),
    ("!=", Symbol::Ne),
    ("<=", Symbol::Le),
    (">=", Symbol::Ge),
    (":=", Symbol::Assign),
    ("..", Symbol::DotDot),
    ("=", Symbol::Eq),
    ("<", Symbol::Lt),
    (">", Symbol::Gt),
    ("+", Symbol::Plus),
    ("-", Symbol::Minus),
    ("*", Symbol::Star),
    (":", Symbol::Colon),
    (";", Symbol::Semi),
    (",", Symbol::Comma),
    (".", Symbol::Dot),
    ("(", Symbol::LParen),
    (")", Symbol::RParen),
    ("[", Symbol::LBracket),
    ("]", Symbol::RBracket),
];

/// Splits `file` into tokens. `file_index` is recorded in every span.
pub fn tokenize(file: &SourceFile, file_index: u32) -> Result<Vec<Token>, LangError> {
    let text = file.text.as_str();
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if text[i..].starts_with("//") {
            i = text[i..].find('\n').map_or(bytes.len(), |n| i + n);
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let kind = match Keyword::from_word(word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word.to_string()),
            };
            tokens.push(Token {
                kind,
                span: Span::new(file_index, start, i),
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let span = Span::new(file_index, start, i);
            let value = text[start..i].parse::<i64>().map_err(|_| LangError::Syntax {
                at: At(Position::of(std::slice::from_ref(file), span)),
                expected: vec!["integer literal within 64 bits".into()],
                found: text[start..i].to_string(),
            })?;
            tokens.push(Token {
                kind: TokenKind::Int(value),
                span,
            });
            continue;
        }
        for (s, sym) in SYMBOLS {
            if text[i..].starts_with(s) {
                tokens.push(Token {
                    kind: TokenKind::Symbol(*sym),
                    span: Span::new(file_index, i, i + s.len()),
                });
                i += s.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap_or('\0');
        let (line, col) = file.line_col(i);
        return Err(LangError::Lexical {
            at: At(Some(Position {
                file: file.name.clone(),
                line,
                col,
            })),
            ch,
        });
    }
    Ok(tokens)
}
