//! Concrete syntax: lexer, parser, printer and static checks for programs
//! and host graphs.

use std::fmt;

mod ast;
mod check;
mod lexer;
mod parser;
mod printer;

pub use ast::{Command, CommandKind, Decl, MacroDecl, MainDecl, Program};
pub use check::check_program;
pub use parser::{parse_command, parse_host_graph, parse_program, ParseError};
pub use printer::{print_command, print_program};

/// Source position (1-based line and column).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A static-check finding tied to a source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub span: Span,
    pub message: String,
}

impl Violation {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Violation {
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}
