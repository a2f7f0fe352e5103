//! A character cursor over one line, shared by the line-oriented formats.

use incind_core::atoms::{Atom, AtomError, Variable};

use crate::SyntaxError;

pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str, line: usize) -> Self {
        Cursor { text, pos: 0, line }
    }

    pub fn line(&self) -> usize {
        self.line
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    pub fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    pub fn peek(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(token)
    }

    /// Consumes `token` after optional whitespace, if present.
    pub fn eat(&mut self, token: &str) -> bool {
        if self.peek(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &str) -> Result<(), SyntaxError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    pub fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    /// A maximal run of identifier characters, possibly empty.
    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    pub fn identifier(&mut self) -> Result<Variable, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let word = self.word();
        Variable::new(word).map_err(|_| {
            self.pos = start;
            self.error(if word.is_empty() {
                "expected an identifier".to_string()
            } else {
                format!("`{word}` is not an identifier")
            })
        })
    }

    pub fn number(&mut self) -> Result<usize, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        self.pos += len;
        rest[..len].parse().map_err(|_| {
            self.pos = start;
            self.error("expected a number")
        })
    }

    pub fn keyword(&mut self) -> &'a str {
        self.word()
    }

    /// Comma-separated items up to (not including) one of `stops`.
    pub fn list<T>(
        &mut self,
        stops: &[&str],
        mut item: impl FnMut(&mut Self) -> Result<T, SyntaxError>,
    ) -> Result<Vec<T>, SyntaxError> {
        let mut out = Vec::new();
        if stops.iter().any(|s| self.peek(s)) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    pub fn variables(&mut self, stops: &[&str]) -> Result<Vec<Variable>, SyntaxError> {
        self.list(stops, Cursor::identifier)
    }

    /// One atom. Zero-length inclusions are accepted only if `allow_empty`.
    pub fn atom(&mut self, allow_empty: bool) -> Result<Atom, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let kind = self.keyword();
        self.expect("(")?;
        let atom = match kind {
            "indep" => {
                let cond = self.variables(&[";"])?;
                self.expect(";")?;
                let left = self.variables(&[";"])?;
                self.expect(";")?;
                let right = self.variables(&[")"])?;
                Atom::independence(cond, left, right)
            }
            "incl" => {
                let lhs = self.variables(&[";"])?;
                self.expect(";")?;
                let rhs = self.variables(&[")"])?;
                if !allow_empty && (lhs.is_empty() || rhs.is_empty()) {
                    return Err(SyntaxError::EmptyInclusion { line: self.line });
                }
                Atom::inclusion(lhs, rhs).map_err(|AtomError::LengthMismatch { lhs, rhs }| {
                    SyntaxError::LengthMismatch {
                        line: self.line,
                        lhs,
                        rhs,
                    }
                })?
            }
            "dep" => {
                let det = self.variables(&[";"])?;
                self.expect(";")?;
                let dep = self.identifier()?;
                Atom::dependence(det, dep)
            }
            _ => {
                self.pos = start;
                return Err(self.error("expected `indep`, `incl` or `dep`"));
            }
        };
        self.expect(")")?;
        Ok(atom)
    }
}
