use incind_core::atoms::Problem;

use crate::cursor::Cursor;
use crate::SyntaxError;

const TURNSTILE: &str = "|-";

/// Parses a problem: assumption lines, then a final `|-` goal line.
/// Blank lines and lines starting with `#` are ignored; a `#` after an atom
/// starts a trailing comment.
pub fn parse_problem(text: &str) -> Result<Problem, SyntaxError> {
    let mut assumptions = Vec::new();
    let mut goal = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(body, line);
        if cur.at_end() {
            continue;
        }
        if goal.is_some() {
            return Err(cur.error("the `|-` goal line must be the last line"));
        }
        if cur.eat(TURNSTILE) {
            let atom = cur.atom(false)?;
            cur.expect_end()?;
            goal = Some(atom);
        } else {
            let atom = cur.atom(false)?;
            cur.expect_end()?;
            assumptions.push(atom);
        }
    }
    match goal {
        Some(goal) => Ok(Problem::new(assumptions, goal)),
        None => Err(SyntaxError::Parse {
            line: last_line.max(1),
            column: 1,
            message: "missing `|-` goal line".into(),
        }),
    }
}

/// One atom per line, ending with the goal line; parses back to an equal
/// problem.
pub fn serialize_problem(p: &Problem) -> String {
    format!("{p}\n")
}
