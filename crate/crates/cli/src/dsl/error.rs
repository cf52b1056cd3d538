use std::fmt;

use super::ast::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Undeclared,
    Mismatch,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Lexical => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Undeclared => "undeclared name",
            ErrorKind::Mismatch => "arity or ring mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Tokens that would have been accepted at the error position.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(kind: ErrorKind, span: Span, message: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            line: span.line,
            col: span.col,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn expecting(mut self, expected: &[&str]) -> ParseError {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}: {}", self.kind.as_str(), self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            let items: Vec<String> = self
                .expected
                .iter()
                .map(|e| match e.as_str() {
                    "identifier" | "integer" | "declaration" | "command" => e.clone(),
                    literal => format!("`{literal}`"),
                })
                .collect();
            write!(f, " (expected {})", items.join(", "))?;
        }
        Ok(())
    }
}
