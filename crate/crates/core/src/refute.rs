//! Bounded search for finite counterexample teams.
//!
//! Teams are enumerated by row count, then by the number of distinct values,
//! then lexicographically in a canonical form: rows strictly increasing and
//! values introduced in order when read row by row. Every team is equal up
//! to value renaming to at least one canonical team, so the search misses no
//! counterexample within its budget. Finding none proves nothing.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::atoms::{Problem, Variable};
use crate::team::{ColumnAtom, Team, TeamError, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest team size tried; 0 disables the search.
    pub max_rows: usize,
    /// Cap on the number of distinct values. A stage with `r` rows tries at
    /// most `2r` values.
    pub max_values: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_rows: 4,
            max_values: 4,
        }
    }
}

impl SearchBudget {
    /// Value bound used for the stage with `rows` rows.
    pub fn values_for(&self, rows: usize) -> usize {
        (rows * 2).min(self.max_values)
    }
}

/// Calls `visit` on every canonical team with exactly `rows` distinct rows of
/// width `width` using exactly `values` distinct values `0..values`, in
/// lexicographic order of the row-major value sequence.
pub fn for_each_canonical_team<B>(
    width: usize,
    rows: usize,
    values: usize,
    mut visit: impl FnMut(&[&[u32]]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let total = width * rows;
    if rows == 0 || width == 0 || values == 0 || values > total {
        return ControlFlow::Continue(());
    }
    let mut cells = alloc::vec![0u32; total];
    let mut search = Search {
        width,
        total,
        values: values as u32,
        cells: &mut cells,
    };
    search.fill(0, 0, &mut visit)
}

struct Search<'c> {
    width: usize,
    total: usize,
    values: u32,
    cells: &'c mut [u32],
}

impl Search<'_> {
    /// Compares the row holding `pos`, up to `pos`, with the previous row:
    /// `None` if smaller, `Some(true)` if greater, `Some(false)` if equal.
    fn row_order(&self, pos: usize) -> Option<bool> {
        let row = pos / self.width;
        if row == 0 {
            return Some(true);
        }
        let start = row * self.width;
        let prev = &self.cells[start - self.width..start];
        let cur = &self.cells[start..=pos];
        for (a, b) in cur.iter().zip(prev) {
            if a > b {
                return Some(true);
            }
            if a < b {
                return None;
            }
        }
        Some(false)
    }

    fn fill<B>(
        &mut self,
        pos: usize,
        used: u32,
        visit: &mut impl FnMut(&[&[u32]]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if pos == self.total {
            if used != self.values {
                return ControlFlow::Continue(());
            }
            let rows: Vec<&[u32]> = self.cells.chunks_exact(self.width).collect();
            return visit(&rows);
        }
        let remaining = (self.total - pos) as u32;
        if self.values - used > remaining {
            return ControlFlow::Continue(());
        }
        let top = used.min(self.values - 1);
        for v in 0..=top {
            self.cells[pos] = v;
            let order = self.row_order(pos);
            let row_end = (pos + 1).is_multiple_of(self.width);
            match order {
                None => continue,
                Some(false) if row_end => continue,
                _ => {}
            }
            let next_used = if v == used { used + 1 } else { used };
            self.fill(pos + 1, next_used, visit)?;
        }
        ControlFlow::Continue(())
    }
}

struct Compiled {
    variables: Vec<Variable>,
    sigma: Vec<ColumnAtom>,
    goal: ColumnAtom,
}

impl Compiled {
    fn new(p: &Problem) -> Result<Self, TeamError> {
        let variables = p.variables();
        let col = |v: &Variable| variables.iter().position(|x| x == v);
        let sigma = p
            .assumptions
            .iter()
            .map(|a| ColumnAtom::resolve(a, col))
            .collect::<Result<_, _>>()?;
        let goal = ColumnAtom::resolve(&p.goal, col)?;
        Ok(Compiled {
            variables,
            sigma,
            goal,
        })
    }

    fn refutes(&self, rows: &[&[u32]]) -> bool {
        !self.goal.holds(rows) && self.sigma.iter().all(|a| a.holds(rows))
    }

    fn team(&self, rows: &[&[u32]]) -> Team {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Value(x)).collect())
            .collect();
        Team::new(self.variables.clone(), rows).expect("rows match the domain")
    }
}

/// Searches teams with exactly `rows` rows and at most `values` values.
pub fn search_stage(p: &Problem, rows: usize, values: usize) -> Option<Team> {
    let compiled = Compiled::new(p).expect("problem variables cover its atoms");
    stage(&compiled, rows, values)
}

fn stage(c: &Compiled, rows: usize, values: usize) -> Option<Team> {
    for m in 1..=values {
        let found = for_each_canonical_team(c.variables.len(), rows, m, |t| {
            if c.refutes(t) {
                ControlFlow::Break(c.team(t))
            } else {
                ControlFlow::Continue(())
            }
        });
        if let ControlFlow::Break(team) = found {
            return Some(team);
        }
    }
    None
}

/// The first canonical team, in enumeration order, that satisfies every
/// assumption and falsifies the goal.
pub fn search_counterexample(p: &Problem, budget: SearchBudget) -> Option<Team> {
    let compiled = Compiled::new(p).expect("problem variables cover its atoms");
    (1..=budget.max_rows).find_map(|r| stage(&compiled, r, budget.values_for(r)))
}

/// Whether `team` satisfies the assumptions and falsifies the goal.
pub fn is_counterexample(p: &Problem, team: &Team) -> Result<bool, TeamError> {
    let goal_holds = crate::team::satisfies_atom(team, &p.goal)?;
    Ok(!goal_holds && crate::team::satisfies_set(team, &p.assumptions)?)
}
