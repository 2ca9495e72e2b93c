//! `.qproto` scripts: a line-oriented language of `prepare`, `measure` and
//! `report` statements.
//!
//! ```text
//! # entanglement swapping
//! prepare singlet(1,2);
//! prepare singlet(3,4);
//! measure bell on (2,3);
//! report entropy(1|4);
//! ```
//!
//! [`parse`] checks syntax only; [`validate`] checks declarations and
//! arities; [`interpret`] runs a validated program either over all outcome
//! branches or along one sampled branch.

mod ast;
mod interpret;
mod lexer;
mod parser;
mod validate;

use std::fmt;

pub use ast::{Axis, BasisSpec, Metric, Program, Source, Statement, StatementKind};
pub use interpret::{interpret, Branch, Mode, MetricRecord, MetricValue, ProtocolOutput, RuntimeError};
pub use parser::{parse, parse_bytes};
pub use validate::validate;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

/// Syntax or validation error with the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl ParseError {
    pub(crate) fn at(pos: Position, message: impl Into<String>, token: impl Into<String>) -> Self {
        Self {
            line: pos.line,
            column: pos.column,
            message: message.into(),
            token: token.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at {:?})", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Parses and validates; returns every diagnostic found.
pub fn compile(source: &str) -> Result<Program, Vec<ParseError>> {
    let program = parse(source).map_err(|e| vec![e])?;
    validate(&program)?;
    Ok(program)
}
