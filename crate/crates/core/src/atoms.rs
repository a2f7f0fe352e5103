//! Variables, dependency atoms and implication problems.
//!
//! Three atom kinds are supported:
//!
//! * `Independence { cond, left, right }` is the conditional independence atom
//!   `left ⊥_cond right` (an embedded multivalued dependency when the tuples are
//!   disjoint).
//! * `Inclusion { lhs, rhs }` is the inclusion atom `lhs ⊆ rhs`.
//! * `Dependence { det, dep }` is the functional dependency `=(det, dep)`. It is
//!   sugar for `Independence { cond: det, left: [dep], right: [dep] }` and is
//!   eliminated by [`normalize_atom`] / [`Atom::to_core`].

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

/// A variable name. Cloning is cheap; equality and ordering are by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

/// Rejected variable name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid identifier `{0}`")]
pub struct InvalidIdentifier(pub alloc::string::String);

impl Variable {
    /// Creates a variable, checking the identifier class `[A-Za-z_][A-Za-z0-9_']*`.
    pub fn new(name: &str) -> Result<Self, InvalidIdentifier> {
        if is_identifier(name) {
            Ok(Variable(Arc::from(name)))
        } else {
            Err(InvalidIdentifier(name.into()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

/// True iff `s` matches `[A-Za-z_][A-Za-z0-9_']*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A dependency atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Independence {
        cond: Vec<Variable>,
        left: Vec<Variable>,
        right: Vec<Variable>,
    },
    Inclusion {
        lhs: Vec<Variable>,
        rhs: Vec<Variable>,
    },
    Dependence {
        det: Vec<Variable>,
        dep: Variable,
    },
}

/// Errors raised when constructing atoms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtomError {
    #[error("inclusion sides have different lengths ({lhs} vs {rhs})")]
    LengthMismatch { lhs: usize, rhs: usize },
}

impl Atom {
    pub fn independence(cond: Vec<Variable>, left: Vec<Variable>, right: Vec<Variable>) -> Self {
        Atom::Independence { cond, left, right }
    }

    /// Builds `lhs ⊆ rhs`, rejecting tuples of different length.
    pub fn inclusion(lhs: Vec<Variable>, rhs: Vec<Variable>) -> Result<Self, AtomError> {
        if lhs.len() != rhs.len() {
            return Err(AtomError::LengthMismatch {
                lhs: lhs.len(),
                rhs: rhs.len(),
            });
        }
        Ok(Atom::Inclusion { lhs, rhs })
    }

    pub fn dependence(det: Vec<Variable>, dep: Variable) -> Self {
        Atom::Dependence { det, dep }
    }

    pub fn is_inclusion(&self) -> bool {
        matches!(self, Atom::Inclusion { .. })
    }

    /// Every variable occurrence, field by field, in textual order.
    pub fn occurrences(&self) -> impl Iterator<Item = &Variable> {
        let (a, b, c): (&[Variable], &[Variable], &[Variable]) = match self {
            Atom::Independence { cond, left, right } => (cond, left, right),
            Atom::Inclusion { lhs, rhs } => (lhs, rhs, &[]),
            Atom::Dependence { det, dep } => (det, core::slice::from_ref(dep), &[]),
        };
        a.iter().chain(b).chain(c)
    }

    /// Variables of the atom, each once, in first-occurrence order.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        collect_unique(self.occurrences(), &mut out);
        out
    }

    /// Replaces dependence sugar by the equivalent independence atom.
    pub fn to_core(&self) -> Atom {
        match self {
            Atom::Dependence { det, dep } => Atom::Independence {
                cond: det.clone(),
                left: alloc::vec![dep.clone()],
                right: alloc::vec![dep.clone()],
            },
            other => other.clone(),
        }
    }

    /// True for the shapes the chase and the proof extractor work with:
    /// inclusion atoms with equal-length sides, and independence atoms whose
    /// sides are repetition-free, disjoint from the condition, and either
    /// disjoint from each other or both equal to a single variable (the
    /// encoding of a dependence atom).
    pub fn is_core_normal(&self) -> bool {
        match self {
            Atom::Inclusion { lhs, rhs } => lhs.len() == rhs.len(),
            Atom::Dependence { .. } => false,
            Atom::Independence { cond, left, right } => {
                let distinct = |t: &[Variable]| {
                    t.iter().enumerate().all(|(i, v)| !t[..i].contains(v))
                };
                if !distinct(left) || !distinct(right) {
                    return false;
                }
                if left.iter().chain(right).any(|v| cond.contains(v)) {
                    return false;
                }
                let overlap = left.iter().any(|v| right.contains(v));
                !overlap || (left.len() == 1 && left == right)
            }
        }
    }
}

fn collect_unique<'a>(vars: impl Iterator<Item = &'a Variable>, out: &mut Vec<Variable>) {
    let mut seen: HashSet<Variable> = out.iter().cloned().collect();
    for v in vars {
        if seen.insert(v.clone()) {
            out.push(v.clone());
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, vars: &[Variable]) -> fmt::Result {
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(v.name())?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Independence { cond, left, right } => {
                f.write_str("indep(")?;
                write_list(f, cond)?;
                f.write_str("; ")?;
                write_list(f, left)?;
                f.write_str("; ")?;
                write_list(f, right)?;
                f.write_str(")")
            }
            Atom::Inclusion { lhs, rhs } => {
                f.write_str("incl(")?;
                write_list(f, lhs)?;
                f.write_str("; ")?;
                write_list(f, rhs)?;
                f.write_str(")")
            }
            Atom::Dependence { det, dep } => {
                f.write_str("dep(")?;
                write_list(f, det)?;
                write!(f, "; {dep})")
            }
        }
    }
}

/// An implication problem `assumptions ⊨ goal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub assumptions: Vec<Atom>,
    pub goal: Atom,
}

impl Problem {
    pub fn new(assumptions: Vec<Atom>, goal: Atom) -> Self {
        Problem { assumptions, goal }
    }

    /// The canonical variable sequence: every variable of the assumptions and
    /// the goal, once, in first-occurrence order.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        collect_unique(
            self.assumptions
                .iter()
                .chain(core::iter::once(&self.goal))
                .flat_map(Atom::occurrences),
            &mut out,
        );
        out
    }

    /// Normalizes every atom and desugars dependence atoms.
    ///
    /// Assumptions are flattened into one list of core atoms (exact duplicates
    /// removed). The goal becomes a non-empty conjunction; a goal that
    /// normalizes to the empty conjunction is kept as the trivially true atom
    /// `indep(cond; ; )` so that it still has a derivation.
    pub fn normalize(&self) -> NormalProblem {
        let mut assumptions: Vec<Atom> = Vec::new();
        for atom in &self.assumptions {
            for n in normalize_atom(atom) {
                let n = n.to_core();
                if !assumptions.contains(&n) {
                    assumptions.push(n);
                }
            }
        }
        let mut goals: Vec<Atom> = Vec::new();
        for n in normalize_atom(&self.goal) {
            let n = n.to_core();
            if !goals.contains(&n) {
                goals.push(n);
            }
        }
        if goals.is_empty() {
            let cond = match &self.goal {
                Atom::Independence { cond, .. } => cond.clone(),
                Atom::Dependence { det, .. } => det.clone(),
                Atom::Inclusion { .. } => unreachable!("inclusion atoms normalize to themselves"),
            };
            goals.push(Atom::independence(cond, Vec::new(), Vec::new()));
        }
        NormalProblem {
            variables: self.variables(),
            original: self.clone(),
            assumptions,
            goals,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assumptions {
            writeln!(f, "{a}")?;
        }
        write!(f, "|- {}", self.goal)
    }
}

/// A problem in the form consumed by the chase and the proof system: core
/// assumptions and a conjunction of core goals over the original problem's
/// canonical variable sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalProblem {
    pub original: Problem,
    pub variables: Vec<Variable>,
    pub assumptions: Vec<Atom>,
    pub goals: Vec<Atom>,
}

impl NormalProblem {
    /// The single-goal query for goal conjunct `index`.
    pub fn query(&self, index: usize) -> Query<'_> {
        Query {
            variables: &self.variables,
            assumptions: &self.assumptions,
            goal: &self.goals[index],
        }
    }
}

/// One goal conjunct together with its assumptions and variable sequence.
#[derive(Debug, Clone, Copy)]
pub struct Query<'a> {
    pub variables: &'a [Variable],
    pub assumptions: &'a [Atom],
    pub goal: &'a Atom,
}

/// Variables of an atom or a problem, once each, in first-occurrence order.
pub trait VariablesOf {
    fn variables_of(&self) -> Vec<Variable>;
}

impl VariablesOf for Atom {
    fn variables_of(&self) -> Vec<Variable> {
        self.variables()
    }
}

impl VariablesOf for Problem {
    fn variables_of(&self) -> Vec<Variable> {
        self.variables()
    }
}

pub fn variables_of<T: VariablesOf + ?Sized>(item: &T) -> Vec<Variable> {
    item.variables_of()
}

fn distinct_filtered(tuple: &[Variable], keep: impl Fn(&Variable) -> bool) -> Vec<Variable> {
    let mut out: Vec<Variable> = Vec::new();
    for v in tuple {
        if keep(v) && !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Rewrites an atom into an equivalent conjunction.
///
/// For `y ⊥_x z` the result is `y* ⊥_x z*` followed by `=(x, u)` for every
/// `u` listed in `(y ∩ z) − x`, where `y*` lists `y − (x ∪ z)` and `z*` lists
/// `z − (x ∪ y)`; lists keep first-occurrence order. An independence atom with
/// both sides empty is dropped. Dependence atoms go through their independence
/// encoding; inclusion atoms are returned unchanged.
pub fn normalize_atom(atom: &Atom) -> Vec<Atom> {
    match atom {
        Atom::Inclusion { .. } => alloc::vec![atom.clone()],
        Atom::Dependence { .. } => normalize_atom(&atom.to_core()),
        Atom::Independence { cond, left, right } => {
            let left_star =
                distinct_filtered(left, |v| !cond.contains(v) && !right.contains(v));
            let right_star =
                distinct_filtered(right, |v| !cond.contains(v) && !left.contains(v));
            let shared = distinct_filtered(left, |v| right.contains(v) && !cond.contains(v));
            let mut out = Vec::new();
            if !left_star.is_empty() || !right_star.is_empty() {
                out.push(Atom::independence(cond.clone(), left_star, right_star));
            }
            out.extend(
                shared
                    .into_iter()
                    .map(|u| Atom::dependence(cond.clone(), u)),
            );
            out
        }
    }
}

/// True iff `phi_prime` arises from `phi` by replacing some (possibly zero)
/// occurrences of `a` by `b`, position by position.
pub fn is_identity_variant(phi: &Atom, phi_prime: &Atom, a: &Variable, b: &Variable) -> bool {
    fn tuple_ok(x: &[Variable], y: &[Variable], a: &Variable, b: &Variable) -> bool {
        x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p == q || (p == a && q == b))
    }
    match (phi, phi_prime) {
        (
            Atom::Independence { cond, left, right },
            Atom::Independence {
                cond: c2,
                left: l2,
                right: r2,
            },
        ) => tuple_ok(cond, c2, a, b) && tuple_ok(left, l2, a, b) && tuple_ok(right, r2, a, b),
        (Atom::Inclusion { lhs, rhs }, Atom::Inclusion { lhs: l2, rhs: r2 }) => {
            tuple_ok(lhs, l2, a, b) && tuple_ok(rhs, r2, a, b)
        }
        (Atom::Dependence { det, dep }, Atom::Dependence { det: d2, dep: y2 }) => {
            tuple_ok(det, d2, a, b)
                && tuple_ok(core::slice::from_ref(dep), core::slice::from_ref(y2), a, b)
        }
        _ => false,
    }
}
