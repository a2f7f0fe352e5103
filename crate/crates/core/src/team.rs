//! Finite teams and atom satisfaction.

use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::atoms::{Atom, Variable};

/// An abstract value. Only equality and order are observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(pub u32);

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TeamError {
    #[error("row {row} has {found} values, domain has {expected} variables")]
    RowWidth {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` listed twice in the team domain")]
    DuplicateVariable(Variable),
    #[error("variable `{0}` is not in the team domain")]
    UnknownVariable(Variable),
}

/// A set of assignments over a fixed, ordered variable domain.
///
/// Rows are kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Team {
    domain: Vec<Variable>,
    rows: Vec<Vec<Value>>,
}

impl Team {
    /// Builds a team; duplicate rows are merged.
    pub fn new(domain: Vec<Variable>, mut rows: Vec<Vec<Value>>) -> Result<Self, TeamError> {
        for (i, v) in domain.iter().enumerate() {
            if domain[..i].contains(v) {
                return Err(TeamError::DuplicateVariable(v.clone()));
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != domain.len() {
                return Err(TeamError::RowWidth {
                    row: i,
                    expected: domain.len(),
                    found: r.len(),
                });
            }
        }
        rows.sort();
        rows.dedup();
        Ok(Team { domain, rows })
    }

    pub fn empty(domain: Vec<Variable>) -> Result<Self, TeamError> {
        Team::new(domain, Vec::new())
    }

    pub fn domain(&self) -> &[Variable] {
        &self.domain
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &Variable) -> Option<usize> {
        self.domain.iter().position(|v| v == var)
    }

    /// Restriction of the team to `vars` (in the given order).
    pub fn restrict(&self, vars: &[Variable]) -> Result<Team, TeamError> {
        let cols = self.columns(vars)?;
        let rows = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        Team::new(vars.to_vec(), rows)
    }

    /// Applies `f` to every value.
    pub fn map_values(&self, mut f: impl FnMut(Value) -> Value) -> Team {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| f(x)).collect())
            .collect();
        Team::new(self.domain.clone(), rows).expect("same shape")
    }

    /// Renames values to `0, 1, …` in first-occurrence order over the sorted
    /// rows, then re-sorts.
    fn renumbered(&self) -> Team {
        let mut order: Vec<Value> = Vec::new();
        for r in &self.rows {
            for x in r {
                if !order.contains(x) {
                    order.push(*x);
                }
            }
        }
        self.map_values(|x| Value(order.iter().position(|y| *y == x).unwrap() as u32))
    }

    /// A deterministic representative of the team up to value renaming, with
    /// values `0, 1, …`. Renumbering is repeated until it cycles and the least
    /// team on the cycle is returned, so `t.canonical().canonical()` equals
    /// `t.canonical()`.
    pub fn canonical(&self) -> Team {
        let mut orbit: Vec<Team> = Vec::new();
        let mut t = self.renumbered();
        loop {
            if let Some(start) = orbit.iter().position(|u| u.rows == t.rows) {
                return orbit.drain(start..).min_by(|a, b| a.rows.cmp(&b.rows)).unwrap();
            }
            let next = t.renumbered();
            orbit.push(t);
            t = next;
        }
    }

    /// Adds a column holding `value` in every row.
    pub fn with_constant_column(&self, var: Variable, value: Value) -> Result<Team, TeamError> {
        let mut domain = self.domain.clone();
        domain.push(var);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(value);
                r
            })
            .collect();
        Team::new(domain, rows)
    }

    fn columns(&self, vars: &[Variable]) -> Result<Vec<usize>, TeamError> {
        vars.iter()
            .map(|v| self.column(v).ok_or_else(|| TeamError::UnknownVariable(v.clone())))
            .collect()
    }
}

/// An atom with its variables resolved to column positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ColumnAtom {
    Independence {
        cond: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    Inclusion {
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    Dependence {
        det: Vec<usize>,
        dep: usize,
    },
}

impl ColumnAtom {
    pub(crate) fn resolve(
        atom: &Atom,
        mut col: impl FnMut(&Variable) -> Option<usize>,
    ) -> Result<ColumnAtom, TeamError> {
        let mut cols = |t: &[Variable]| -> Result<Vec<usize>, TeamError> {
            t.iter()
                .map(|v| col(v).ok_or_else(|| TeamError::UnknownVariable(v.clone())))
                .collect()
        };
        Ok(match atom {
            Atom::Independence { cond, left, right } => ColumnAtom::Independence {
                cond: cols(cond)?,
                left: cols(left)?,
                right: cols(right)?,
            },
            Atom::Inclusion { lhs, rhs } => ColumnAtom::Inclusion {
                lhs: cols(lhs)?,
                rhs: cols(rhs)?,
            },
            Atom::Dependence { det, dep } => ColumnAtom::Dependence {
                det: cols(det)?,
                dep: cols(core::slice::from_ref(dep))?[0],
            },
        })
    }

    /// Evaluates the atom on a list of rows by direct quantification. Rows
    /// larger than a small threshold use hashed lookups for the existential.
    pub(crate) fn holds<R, V>(&self, rows: &[R]) -> bool
    where
        R: AsRef<[V]>,
        V: Eq + Copy + core::hash::Hash,
    {
        let agree = |s: &[V], cs: &[usize], t: &[V], ct: &[usize]| {
            cs.iter().zip(ct).all(|(&i, &j)| s[i] == t[j])
        };
        match self {
            ColumnAtom::Dependence { det, dep } => rows.iter().all(|s| {
                let s = s.as_ref();
                rows.iter().all(|t| {
                    let t = t.as_ref();
                    !agree(s, det, t, det) || s[*dep] == t[*dep]
                })
            }),
            ColumnAtom::Inclusion { lhs, rhs } => {
                if lhs.len() != rhs.len() {
                    return false;
                }
                if rows.len() <= 16 {
                    rows.iter().all(|s| {
                        rows.iter().any(|t| agree(s.as_ref(), lhs, t.as_ref(), rhs))
                    })
                } else {
                    let image: HashSet<Vec<V>> = rows
                        .iter()
                        .map(|t| rhs.iter().map(|&j| t.as_ref()[j]).collect())
                        .collect();
                    rows.iter().all(|s| {
                        let key: Vec<V> = lhs.iter().map(|&i| s.as_ref()[i]).collect();
                        image.contains(&key)
                    })
                }
            }
            ColumnAtom::Independence { cond, left, right } => {
                if rows.len() <= 16 {
                    rows.iter().all(|s| {
                        let s = s.as_ref();
                        rows.iter().all(|t| {
                            let t = t.as_ref();
                            !agree(s, cond, t, cond)
                                || rows.iter().any(|u| {
                                    let u = u.as_ref();
                                    agree(u, cond, s, cond)
                                        && agree(u, left, s, left)
                                        && agree(u, right, t, right)
                                })
                        })
                    })
                } else {
                    let key = |u: &[V], a: &[V], b: &[V]| -> Vec<V> {
                        cond.iter()
                            .map(|&i| u[i])
                            .chain(left.iter().map(|&i| a[i]))
                            .chain(right.iter().map(|&i| b[i]))
                            .collect()
                    };
                    let present: HashSet<Vec<V>> = rows
                        .iter()
                        .map(|u| key(u.as_ref(), u.as_ref(), u.as_ref()))
                        .collect();
                    rows.iter().all(|s| {
                        let s = s.as_ref();
                        rows.iter().all(|t| {
                            let t = t.as_ref();
                            !agree(s, cond, t, cond) || present.contains(&key(s, s, t))
                        })
                    })
                }
            }
        }
    }
}

/// Whether `team` satisfies `atom`.
pub fn satisfies_atom(team: &Team, atom: &Atom) -> Result<bool, TeamError> {
    let compiled = ColumnAtom::resolve(atom, |v| team.column(v))?;
    Ok(compiled.holds(&team.rows))
}

/// Whether `team` satisfies every atom of `sigma`.
pub fn satisfies_set(team: &Team, sigma: &[Atom]) -> Result<bool, TeamError> {
    for a in sigma {
        if !satisfies_atom(team, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}
