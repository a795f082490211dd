//! Lexer, parser and printer for MiniJ, the small Java-flavoured language the
//! analyses run on. See `docs/grammar.md` for the grammar.

pub mod ast;
mod error;
mod lexer;
mod parser;
pub mod pretty;

pub use ast::Program;
pub use error::{FrontendError, LexError, ParseError};
pub use lexer::{tokenize, Token, TokenKind, KEYWORDS};
pub use parser::{field_path, parse, parse_source};
