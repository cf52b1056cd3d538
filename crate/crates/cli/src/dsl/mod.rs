//! The session-script language: lexing, parsing and canonical printing.

pub mod ast;
pub mod error;
pub mod lexer;
pub mod parser;

pub use ast::Script;
pub use error::{ErrorKind, ParseError};
pub use parser::parse;
