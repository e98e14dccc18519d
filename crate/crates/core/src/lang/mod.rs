//! The `.fsc` specification language: lexing, parsing, printing and name resolution.

pub mod ast;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod resolve;
pub mod source;

pub use ast::SourceSpec;
pub use error::{LangError, ResolveKind};
pub use parser::{parse_expr, parse_source, parse_sources};
pub use printer::{print_expr, print_spec};
pub use resolve::{resolve, resolve_expr, ResolveOptions};
