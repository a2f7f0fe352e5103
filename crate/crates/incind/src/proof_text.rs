//! One step per line:
//!
//! ```text
//! 3. incl(a, b, c; a, c, x) ; rule=chase ; premises=[1,2] ; new=[] ; params=-
//! ```
//!
//! `params` carries the rule's own arguments: `[i,j,…]` for `proj_perm`,
//! `a:<from>,b:<to>` for `identity`, `c:<column>,x:<fresh>` for `incl_intro`,
//! `a:[…],b:[…],c:[…],x:[…]` for `start`, and `-` otherwise.

use std::fmt::Write;

use incind_core::atoms::{Problem, Variable};
use incind_core::proof::{Derivation, ProofStep, Rule, StepError, StepFault};

use crate::cursor::Cursor;
use crate::SyntaxError;

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    let mut out = String::new();
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{x}").unwrap();
    }
    out
}

fn params(rule: &Rule) -> String {
    match rule {
        Rule::ProjPerm { indices } => format!("[{}]", join(indices)),
        Rule::Identity { from, to } => format!("a:{from},b:{to}"),
        Rule::InclIntro { column, fresh } => format!("c:{column},x:{fresh}"),
        Rule::StartAxiom {
            shared,
            left,
            right,
            fresh,
        } => format!(
            "a:[{}],b:[{}],c:[{}],x:[{}]",
            join(shared),
            join(left),
            join(right),
            join(fresh)
        ),
        _ => "-".into(),
    }
}

/// Writes one line per step. Lines are `\n`-terminated.
pub fn serialize_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    for s in &d.steps {
        let atoms: Vec<String> = s.conclusion.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "{}. {} ; rule={} ; premises=[{}] ; new=[{}] ; params={}",
            s.index,
            atoms.join(" & "),
            s.rule.tag(),
            join(&s.premises),
            join(&s.new_vars),
            params(&s.rule)
        )
        .unwrap();
    }
    out
}

fn field(cur: &mut Cursor<'_>, name: &str) -> Result<(), SyntaxError> {
    cur.expect(";")?;
    cur.expect(name)?;
    cur.expect("=")
}

fn bracketed<'a, T>(
    cur: &mut Cursor<'a>,
    item: impl FnMut(&mut Cursor<'a>) -> Result<T, SyntaxError>,
) -> Result<Vec<T>, SyntaxError> {
    cur.expect("[")?;
    let items = cur.list(&["]"], item)?;
    cur.expect("]")?;
    Ok(items)
}

fn named_variable(cur: &mut Cursor<'_>, key: &str) -> Result<Variable, SyntaxError> {
    cur.expect(key)?;
    cur.expect(":")?;
    cur.identifier()
}

fn named_list(cur: &mut Cursor<'_>, key: &str) -> Result<Vec<Variable>, SyntaxError> {
    cur.expect(key)?;
    cur.expect(":")?;
    bracketed(cur, Cursor::identifier)
}

fn rule(cur: &mut Cursor<'_>, tag: &str, index: usize) -> Result<Rule, SyntaxError> {
    let simple = match tag {
        "assume" => Some(Rule::Assume),
        "conj_intro" => Some(Rule::ConjIntro),
        "conj_elim" => Some(Rule::ConjElim),
        "refl" => Some(Rule::Reflexivity),
        "trans" => Some(Rule::Transitivity),
        "chase" => Some(Rule::ChaseRule),
        "final" => Some(Rule::FinalRule),
        _ => None,
    };
    if let Some(r) = simple {
        cur.expect("-")?;
        return Ok(r);
    }
    Ok(match tag {
        "proj_perm" => Rule::ProjPerm {
            indices: bracketed(cur, Cursor::number)?,
        },
        "identity" => {
            let from = named_variable(cur, "a")?;
            cur.expect(",")?;
            let to = named_variable(cur, "b")?;
            Rule::Identity { from, to }
        }
        "incl_intro" => {
            let column = named_variable(cur, "c")?;
            cur.expect(",")?;
            let fresh = named_variable(cur, "x")?;
            Rule::InclIntro { column, fresh }
        }
        "start" => {
            let shared = named_list(cur, "a")?;
            cur.expect(",")?;
            let left = named_list(cur, "b")?;
            cur.expect(",")?;
            let right = named_list(cur, "c")?;
            cur.expect(",")?;
            let fresh = named_list(cur, "x")?;
            Rule::StartAxiom {
                shared,
                left,
                right,
                fresh,
            }
        }
        _ => {
            return Err(SyntaxError::Rule {
                line: cur.line(),
                source: StepError {
                    index,
                    fault: StepFault::UnknownRule,
                    detail: format!("unknown rule `{tag}`"),
                },
            })
        }
    })
}

fn step(cur: &mut Cursor<'_>, expected: usize) -> Result<ProofStep, SyntaxError> {
    let index = cur.number()?;
    if index != expected {
        return Err(cur.error(format!("expected step number {expected}, found {index}")));
    }
    cur.expect(".")?;
    let mut conclusion = vec![cur.atom(true)?];
    while cur.eat("&") {
        conclusion.push(cur.atom(true)?);
    }
    field(cur, "rule")?;
    let tag = cur.keyword();
    field(cur, "premises")?;
    let premises = bracketed(cur, Cursor::number)?;
    if let Some(&premise) = premises.iter().find(|&&p| p == 0 || p >= index) {
        return Err(SyntaxError::Index {
            line: cur.line(),
            step: index,
            premise,
        });
    }
    field(cur, "new")?;
    let new_vars = bracketed(cur, Cursor::identifier)?;
    field(cur, "params")?;
    let rule = rule(cur, tag, index)?;
    cur.expect_end()?;
    Ok(ProofStep {
        index,
        conclusion,
        rule,
        premises,
        new_vars,
    })
}

/// Parses a derivation of `p`'s normalized form. Blank lines and lines
/// starting with `#` are skipped. The result is not checked; see
/// [`incind_core::check_derivation`].
pub fn parse_derivation(text: &str, p: &Problem) -> Result<Derivation, SyntaxError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim_start().starts_with('#') || raw.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(raw, i + 1);
        steps.push(step(&mut cur, steps.len() + 1)?);
    }
    if steps.is_empty() {
        return Err(SyntaxError::Parse {
            line: 1,
            column: 1,
            message: "derivation has no steps".into(),
        });
    }
    Ok(Derivation {
        problem: p.normalize(),
        steps,
    })
}
