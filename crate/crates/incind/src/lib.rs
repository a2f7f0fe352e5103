//! Text formats for the incind solver.
//!
//! Problems use a prefix syntax, one atom per line:
//!
//! ```text
//! # comment
//! indep(a; b; c)      # b ⊥_a c
//! incl(x, y; u, v)    # xy ⊆ uv
//! dep(x; y)           # =(x, y)
//! |- indep(a; c; b)
//! ```
//!
//! Derivations and teams have line formats that round-trip exactly; see
//! [`serialize_derivation`] and [`serialize_team`].

mod cursor;
mod problem;
mod proof_text;
mod team_text;

pub use problem::{parse_problem, serialize_problem};
pub use proof_text::{parse_derivation, serialize_derivation};
pub use team_text::{parse_team, serialize_team};

use incind_core::proof::StepError;

/// Errors from any of the text formats. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}: inclusion sides have different lengths ({lhs} vs {rhs})")]
    LengthMismatch { line: usize, lhs: usize, rhs: usize },
    #[error("{line}: inclusion atoms need at least one variable per side")]
    EmptyInclusion { line: usize },
    #[error("{line}: step {step} cites premise {premise}, which does not precede it")]
    Index {
        line: usize,
        step: usize,
        premise: usize,
    },
    #[error("{line}: {source}")]
    Rule { line: usize, source: StepError },
}

impl SyntaxError {
    pub fn line(&self) -> usize {
        match *self {
            SyntaxError::Parse { line, .. }
            | SyntaxError::LengthMismatch { line, .. }
            | SyntaxError::EmptyInclusion { line }
            | SyntaxError::Index { line, .. }
            | SyntaxError::Rule { line, .. } => line,
        }
    }
}
