//! Derivations and their checker.
//!
//! A derivation is a numbered list of steps. Each step states a conjunction
//! of atoms, names the rule that justifies it, and lists the earlier steps it
//! uses. The normalized assumptions are always available and need not be
//! listed. Checking recomputes what the rule allows from the available atoms
//! and compares it with the stated conclusion.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::atoms::{is_identity_variant, Atom, NormalProblem, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Restates assumptions.
    Assume,
    /// Concatenates the conclusions of the premises, in order.
    ConjIntro,
    /// Keeps some of the conjuncts of one premise.
    ConjElim,
    /// `x̄ ⊆ x̄`.
    Reflexivity,
    /// From `x₁…xₙ ⊆ y₁…yₙ` infer `x_{i₁}…x_{iₖ} ⊆ y_{i₁}…y_{iₖ}`; indices
    /// are 1-based and may repeat.
    ProjPerm { indices: Vec<usize> },
    /// From `x̄ ⊆ ȳ` and `ȳ ⊆ z̄` infer `x̄ ⊆ z̄`.
    Transitivity,
    /// From `ab ⊆ cc` and `φ` infer `φ'`, where `φ'` replaces some
    /// occurrences of `a` in `φ` by `b`.
    Identity { from: Variable, to: Variable },
    /// From `ā ⊆ b̄` infer `ā x ⊆ b̄ c` with `x` new.
    InclIntro { column: Variable, fresh: Variable },
    /// `ā c̄ ⊆ ā x̄ ∧ b̄ ⊥_ā x̄ ∧ ā x̄ ⊆ ā c̄` with `x̄` new and pairwise distinct.
    StartAxiom {
        shared: Vec<Variable>,
        left: Vec<Variable>,
        right: Vec<Variable>,
        fresh: Vec<Variable>,
    },
    /// From `ȳ ⊥_x̄ z̄`, `ā b̄ ⊆ x̄ ȳ` and `ā c̄ ⊆ x̄ z̄` infer `ā b̄ c̄ ⊆ x̄ ȳ z̄`.
    ChaseRule,
    /// From `ā c̄ ⊆ ā x̄`, `b̄ ⊥_ā x̄` and `ā b̄ x̄ ⊆ ā b̄ c̄` infer `b̄ ⊥_ā c̄`.
    FinalRule,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Assume => "assume",
            Rule::ConjIntro => "conj_intro",
            Rule::ConjElim => "conj_elim",
            Rule::Reflexivity => "refl",
            Rule::ProjPerm { .. } => "proj_perm",
            Rule::Transitivity => "trans",
            Rule::Identity { .. } => "identity",
            Rule::InclIntro { .. } => "incl_intro",
            Rule::StartAxiom { .. } => "start",
            Rule::ChaseRule => "chase",
            Rule::FinalRule => "final",
        }
    }

    /// Variables this rule application declares new.
    pub fn introduced(&self) -> &[Variable] {
        match self {
            Rule::InclIntro { fresh, .. } => core::slice::from_ref(fresh),
            Rule::StartAxiom { fresh, .. } => fresh,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    /// 1-based position in the derivation.
    pub index: usize,
    pub conclusion: Vec<Atom>,
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub new_vars: Vec<Variable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub problem: NormalProblem,
    pub steps: Vec<ProofStep>,
}

impl Derivation {
    /// The step whose conclusion is the goal.
    pub fn goal_step(&self) -> Option<&ProofStep> {
        self.steps.last()
    }

    /// Every variable declared new anywhere in the derivation.
    pub fn new_variables(&self) -> impl Iterator<Item = &Variable> {
        self.steps.iter().flat_map(|s| s.new_vars.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepFault {
    BadShape,
    BadPremise,
    FreshnessViolation,
    UnknownRule,
    LengthMismatch,
}

impl fmt::Display for StepFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepFault::BadShape => "bad shape",
            StepFault::BadPremise => "bad premise",
            StepFault::FreshnessViolation => "freshness violation",
            StepFault::UnknownRule => "unknown rule",
            StepFault::LengthMismatch => "length mismatch",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {index}: {fault}: {detail}")]
pub struct StepError {
    pub index: usize,
    pub fault: StepFault,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("derivation has no steps")]
    Empty,
    #[error("final step does not conclude the goal")]
    GoalMismatch,
    #[error("goal mentions `{0}`, which the derivation declared new")]
    GoalContainsNewVariable(Variable),
}

fn fault(index: usize, fault: StepFault, detail: impl Into<String>) -> StepError {
    StepError {
        index,
        fault,
        detail: detail.into(),
    }
}

/// Variables that count as already used: the assumptions, every accepted
/// conclusion and every declared new variable.
struct Seen {
    vars: HashSet<Variable>,
}

impl Seen {
    fn new(problem: &NormalProblem) -> Self {
        let mut vars: HashSet<Variable> = HashSet::new();
        for a in problem
            .original
            .assumptions
            .iter()
            .chain(&problem.assumptions)
        {
            vars.extend(a.occurrences().cloned());
        }
        Seen { vars }
    }

    fn record(&mut self, step: &ProofStep) {
        for a in &step.conclusion {
            self.vars.extend(a.occurrences().cloned());
        }
        self.vars.extend(step.new_vars.iter().cloned());
    }
}

/// Checks step `index` (1-based), assuming every earlier step is accepted.
pub fn check_step(d: &Derivation, index: usize) -> Result<(), StepError> {
    if index == 0 || index > d.steps.len() {
        return Err(fault(index, StepFault::BadShape, "no such step"));
    }
    let mut seen = Seen::new(&d.problem);
    for s in &d.steps[..index - 1] {
        seen.record(s);
    }
    check_against(d, index, &seen)
}

/// Checks every step, then that the last step concludes the goal and that no
/// goal variable was declared new.
pub fn check_derivation(d: &Derivation) -> Result<(), DerivationError> {
    if d.steps.is_empty() {
        return Err(DerivationError::Empty);
    }
    let mut seen = Seen::new(&d.problem);
    for (i, s) in d.steps.iter().enumerate() {
        check_against(d, i + 1, &seen)?;
        seen.record(s);
    }
    let declared: HashSet<&Variable> = d.new_variables().collect();
    for g in &d.problem.goals {
        if let Some(v) = g.occurrences().find(|v| declared.contains(v)) {
            return Err(DerivationError::GoalContainsNewVariable(v.clone()));
        }
    }
    if d.steps.last().map(|s| &s.conclusion) != Some(&d.problem.goals) {
        return Err(DerivationError::GoalMismatch);
    }
    Ok(())
}

fn check_against(d: &Derivation, index: usize, seen: &Seen) -> Result<(), StepError> {
    let step = &d.steps[index - 1];
    let err = |f: StepFault, detail: &str| Err(fault(index, f, detail));
    if step.index != index {
        return err(StepFault::BadShape, "step number out of sequence");
    }
    if step.conclusion.is_empty() {
        return err(StepFault::BadShape, "empty conclusion");
    }
    for a in &step.conclusion {
        if let Atom::Inclusion { lhs, rhs } = a {
            if lhs.len() != rhs.len() {
                return err(StepFault::LengthMismatch, "inclusion sides differ in length");
            }
        }
    }
    if step.rule.introduced() != step.new_vars.as_slice() {
        return err(StepFault::BadShape, "new variables do not match the rule");
    }
    for (k, x) in step.new_vars.iter().enumerate() {
        if seen.vars.contains(x) {
            return err(StepFault::FreshnessViolation, "new variable already in use");
        }
        if step.new_vars[..k].contains(x) {
            return err(StepFault::FreshnessViolation, "new variables repeat");
        }
    }
    let mut premises: Vec<&ProofStep> = Vec::with_capacity(step.premises.len());
    for &p in &step.premises {
        if p == 0 || p >= index {
            return err(StepFault::BadPremise, "premise is not an earlier step");
        }
        premises.push(&d.steps[p - 1]);
    }
    let pool = Pool {
        sigma: &d.problem.assumptions,
        premises: &premises,
    };
    let single = || match step.conclusion.as_slice() {
        [a] => Ok(a),
        _ => Err(fault(index, StepFault::BadShape, "expected a single atom")),
    };
    let no_premises = || {
        if step.premises.is_empty() {
            Ok(())
        } else {
            Err(fault(index, StepFault::BadPremise, "rule takes no premises"))
        }
    };

    match &step.rule {
        Rule::Assume => {
            no_premises()?;
            if !step.conclusion.iter().all(|a| pool.sigma.contains(a)) {
                return err(StepFault::BadPremise, "not an assumption");
            }
        }
        Rule::ConjIntro => {
            if premises.is_empty() {
                return err(StepFault::BadPremise, "no premises");
            }
            let joined: Vec<&Atom> = premises.iter().flat_map(|p| &p.conclusion).collect();
            if !joined.iter().copied().eq(step.conclusion.iter()) {
                return err(StepFault::BadShape, "not the conjunction of the premises");
            }
        }
        Rule::ConjElim => {
            let [p] = premises.as_slice() else {
                return err(StepFault::BadPremise, "expected one premise");
            };
            if !step.conclusion.iter().all(|a| p.conclusion.contains(a)) {
                return err(StepFault::BadShape, "not a conjunct of the premise");
            }
        }
        Rule::Reflexivity => {
            no_premises()?;
            match single()? {
                Atom::Inclusion { lhs, rhs } if lhs == rhs => {}
                _ => return err(StepFault::BadShape, "not of the form x ⊆ x"),
            }
        }
        Rule::ProjPerm { indices } => {
            let conclusion = single()?;
            let ok = pool.inclusions().any(|(lhs, rhs)| {
                indices.iter().all(|&i| (1..=lhs.len()).contains(&i))
                    && conclusion == &project(lhs, rhs, indices)
            });
            if !ok {
                return err(StepFault::BadPremise, "no premise projects to the conclusion");
            }
        }
        Rule::Transitivity => {
            let Atom::Inclusion { lhs: x, rhs: z } = single()? else {
                return err(StepFault::BadShape, "conclusion is not an inclusion");
            };
            let ok = pool.inclusions().any(|(l, y)| {
                l == x.as_slice()
                    && pool
                        .inclusions()
                        .any(|(y2, r)| y2 == y && r == z.as_slice())
            });
            if !ok {
                return err(StepFault::BadPremise, "no chain x ⊆ y ⊆ z available");
            }
        }
        Rule::Identity { from, to } => {
            let conclusion = single()?;
            let eq = pool.inclusions().any(|(l, r)| {
                l.len() == 2 && l[0] == *from && l[1] == *to && r[0] == r[1]
            });
            if !eq {
                return err(StepFault::BadPremise, "missing equivalence atom");
            }
            if !pool
                .atoms()
                .any(|phi| is_identity_variant(phi, conclusion, from, to))
            {
                return err(StepFault::BadPremise, "no premise rewrites to the conclusion");
            }
        }
        Rule::InclIntro { column, fresh } => {
            let Atom::Inclusion { lhs, rhs } = single()? else {
                return err(StepFault::BadShape, "conclusion is not an inclusion");
            };
            let (Some((x, l)), Some((c, r))) = (lhs.split_last(), rhs.split_last()) else {
                return err(StepFault::BadShape, "conclusion is empty");
            };
            if x != fresh || c != column {
                return err(StepFault::BadShape, "last column does not match the parameters");
            }
            if column == fresh {
                return err(StepFault::FreshnessViolation, "column equals the new variable");
            }
            if !seen.vars.contains(column) && !d.problem.variables.contains(column) {
                return err(StepFault::BadShape, "column variable has not been used yet");
            }
            if !pool.inclusions().any(|(pl, pr)| pl == l && pr == r) {
                return err(StepFault::BadPremise, "missing shortened inclusion");
            }
        }
        Rule::StartAxiom {
            shared,
            left,
            right,
            fresh,
        } => {
            no_premises()?;
            if fresh.len() != right.len() {
                return err(StepFault::LengthMismatch, "fresh tuple and right side differ");
            }
            let cat = |a: &[Variable], b: &[Variable]| [a, b].concat();
            let expected = [
                Atom::Inclusion {
                    lhs: cat(shared, right),
                    rhs: cat(shared, fresh),
                },
                Atom::independence(shared.clone(), left.clone(), fresh.clone()),
                Atom::Inclusion {
                    lhs: cat(shared, fresh),
                    rhs: cat(shared, right),
                },
            ];
            if step.conclusion != expected {
                return err(StepFault::BadShape, "not an instance of the start axiom");
            }
        }
        Rule::ChaseRule => {
            let Atom::Inclusion { lhs, rhs } = single()? else {
                return err(StepFault::BadShape, "conclusion is not an inclusion");
            };
            let ok = pool.independences().any(|(x, y, z)| {
                let (nx, ny) = (x.len(), y.len());
                if rhs.len() != nx + ny + z.len()
                    || rhs[..nx] != *x
                    || rhs[nx..nx + ny] != *y
                    || rhs[nx + ny..] != *z
                {
                    return false;
                }
                let (a, b, c) = (&lhs[..nx], &lhs[nx..nx + ny], &lhs[nx + ny..]);
                pool.has_inclusion(&[a, b].concat(), &[x, y].concat())
                    && pool.has_inclusion(&[a, c].concat(), &[x, z].concat())
            });
            if !ok {
                return err(StepFault::BadPremise, "premises do not license the chase rule");
            }
        }
        Rule::FinalRule => {
            let Atom::Independence {
                cond: a,
                left: b,
                right: c,
            } = single()?
            else {
                return err(StepFault::BadShape, "conclusion is not an independence atom");
            };
            let ok = pool.independences().any(|(a2, b2, x)| {
                a2 == a.as_slice()
                    && b2 == b.as_slice()
                    && x.len() == c.len()
                    && pool.has_inclusion(&[&a[..], c].concat(), &[a, x].concat())
                    && pool.has_inclusion(&[a, b, x].concat(), &[&a[..], b, c].concat())
            });
            if !ok {
                return err(StepFault::BadPremise, "premises do not license the final rule");
            }
        }
    }
    Ok(())
}

/// Projects `lhs ⊆ rhs` onto 1-based `indices`.
pub fn project(lhs: &[Variable], rhs: &[Variable], indices: &[usize]) -> Atom {
    Atom::Inclusion {
        lhs: indices.iter().map(|&i| lhs[i - 1].clone()).collect(),
        rhs: indices.iter().map(|&i| rhs[i - 1].clone()).collect(),
    }
}

/// Atoms a step may use.
struct Pool<'a> {
    sigma: &'a [Atom],
    premises: &'a [&'a ProofStep],
}

impl<'a> Pool<'a> {
    fn atoms(&self) -> impl Iterator<Item = &'a Atom> + '_ {
        self.sigma
            .iter()
            .chain(self.premises.iter().flat_map(|p| p.conclusion.iter()))
    }

    fn inclusions(&self) -> impl Iterator<Item = (&'a [Variable], &'a [Variable])> + '_ {
        self.atoms().filter_map(|a| match a {
            Atom::Inclusion { lhs, rhs } => Some((lhs.as_slice(), rhs.as_slice())),
            _ => None,
        })
    }

    fn independences(
        &self,
    ) -> impl Iterator<Item = (&'a [Variable], &'a [Variable], &'a [Variable])> + '_ {
        self.atoms().filter_map(|a| match a {
            Atom::Independence { cond, left, right } => {
                Some((cond.as_slice(), left.as_slice(), right.as_slice()))
            }
            _ => None,
        })
    }

    fn has_inclusion(&self, lhs: &[Variable], rhs: &[Variable]) -> bool {
        self.inclusions().any(|(l, r)| l == lhs && r == rhs)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::atoms::tests::{incl, indep, v, vs};
    use crate::atoms::Problem;
    use alloc::vec;

    pub(crate) fn step(
        index: usize,
        conclusion: Vec<Atom>,
        rule: Rule,
        premises: &[usize],
    ) -> ProofStep {
        ProofStep {
            index,
            conclusion,
            new_vars: rule.introduced().to_vec(),
            rule,
            premises: premises.to_vec(),
        }
    }

    /// indep(a; c; b) from indep(a; b; c) in five steps.
    pub(crate) fn symmetry_derivation() -> Derivation {
        let problem =
            Problem::new(vec![indep(&["a"], &["b"], &["c"])], indep(&["a"], &["c"], &["b"]))
                .normalize();
        let steps = vec![
            step(
                1,
                vec![
                    incl(&["a", "b"], &["a", "b'"]),
                    indep(&["a"], &["c"], &["b'"]),
                    incl(&["a", "b'"], &["a", "b"]),
                ],
                Rule::StartAxiom {
                    shared: vs(&["a"]),
                    left: vs(&["c"]),
                    right: vs(&["b"]),
                    fresh: vs(&["b'"]),
                },
                &[],
            ),
            step(2, vec![incl(&["a", "c"], &["a", "c"])], Rule::Reflexivity, &[]),
            step(
                3,
                vec![incl(&["a", "b'", "c"], &["a", "b", "c"])],
                Rule::ChaseRule,
                &[1, 2],
            ),
            step(
                4,
                vec![incl(&["a", "c", "b'"], &["a", "c", "b"])],
                Rule::ProjPerm {
                    indices: vec![1, 3, 2],
                },
                &[3],
            ),
            step(5, vec![indep(&["a"], &["c"], &["b"])], Rule::FinalRule, &[1, 4]),
        ];
        Derivation { problem, steps }
    }

    /// indep(a; b; c) from indep(a; b; c, d) in six steps.
    pub(crate) fn weakening_derivation() -> Derivation {
        let problem = Problem::new(
            vec![indep(&["a"], &["b"], &["c", "d"])],
            indep(&["a"], &["b"], &["c"]),
        )
        .normalize();
        let steps = vec![
            step(
                1,
                vec![
                    incl(&["a", "c"], &["a", "c'"]),
                    indep(&["a"], &["b"], &["c'"]),
                    incl(&["a", "c'"], &["a", "c"]),
                ],
                Rule::StartAxiom {
                    shared: vs(&["a"]),
                    left: vs(&["b"]),
                    right: vs(&["c"]),
                    fresh: vs(&["c'"]),
                },
                &[],
            ),
            step(
                2,
                vec![incl(&["a", "c'", "d'"], &["a", "c", "d"])],
                Rule::InclIntro {
                    column: v("d"),
                    fresh: v("d'"),
                },
                &[1],
            ),
            step(3, vec![incl(&["a", "b"], &["a", "b"])], Rule::Reflexivity, &[]),
            step(
                4,
                vec![incl(&["a", "b", "c'", "d'"], &["a", "b", "c", "d"])],
                Rule::ChaseRule,
                &[2, 3],
            ),
            step(
                5,
                vec![incl(&["a", "b", "c'"], &["a", "b", "c"])],
                Rule::ProjPerm {
                    indices: vec![1, 2, 3],
                },
                &[4],
            ),
            step(6, vec![indep(&["a"], &["b"], &["c"])], Rule::FinalRule, &[1, 5]),
        ];
        Derivation { problem, steps }
    }

    fn fault_of(d: &Derivation) -> Option<StepFault> {
        match check_derivation(d) {
            Err(DerivationError::Step(e)) => Some(e.fault),
            _ => None,
        }
    }

    #[test]
    fn worked_derivations_check() {
        assert_eq!(check_derivation(&symmetry_derivation()), Ok(()));
        assert_eq!(check_derivation(&weakening_derivation()), Ok(()));
    }

    #[test]
    fn single_steps() {
        let d = symmetry_derivation();
        for i in 1..=5 {
            assert_eq!(check_step(&d, i), Ok(()));
        }
    }

    #[test]
    fn start_reusing_an_assumption_variable_is_rejected() {
        let mut d = symmetry_derivation();
        d.steps[0].rule = Rule::StartAxiom {
            shared: vs(&["a"]),
            left: vs(&["c"]),
            right: vs(&["b"]),
            fresh: vs(&["c"]),
        };
        d.steps[0].new_vars = vs(&["c"]);
        assert_eq!(
            check_step(&d, 1).unwrap_err().fault,
            StepFault::FreshnessViolation
        );
    }

    #[test]
    fn goal_with_new_variable_is_rejected() {
        let mut d = symmetry_derivation();
        let goal = indep(&["a"], &["c"], &["b'"]);
        d.problem = Problem::new(d.problem.original.assumptions.clone(), goal.clone()).normalize();
        d.steps.truncate(1);
        d.steps.push(step(2, vec![goal], Rule::ConjElim, &[1]));
        assert!(matches!(
            check_derivation(&d),
            Err(DerivationError::GoalContainsNewVariable(x)) if x == v("b'")
        ));
    }

    #[test]
    fn wrong_goal_is_rejected() {
        let mut d = symmetry_derivation();
        d.steps.pop();
        assert_eq!(check_derivation(&d), Err(DerivationError::GoalMismatch));
    }

    #[test]
    fn forward_premise_is_rejected() {
        let mut d = symmetry_derivation();
        d.steps[2].premises = vec![1, 4];
        assert_eq!(fault_of(&d), Some(StepFault::BadPremise));
    }

    #[test]
    fn projection_is_recomputed() {
        let mut d = symmetry_derivation();
        d.steps[3].rule = Rule::ProjPerm {
            indices: vec![1, 2, 3],
        };
        assert_eq!(fault_of(&d), Some(StepFault::BadPremise));
        d.steps[3].rule = Rule::ProjPerm {
            indices: vec![1, 3, 4],
        };
        assert_eq!(fault_of(&d), Some(StepFault::BadPremise));
    }

    #[test]
    fn transitivity_concludes_outer_tuples() {
        let problem = Problem::new(
            vec![incl(&["x"], &["y"]), incl(&["y"], &["z"])],
            incl(&["x"], &["z"]),
        )
        .normalize();
        let mut d = Derivation {
            problem,
            steps: vec![step(1, vec![incl(&["x"], &["z"])], Rule::Transitivity, &[])],
        };
        assert_eq!(check_derivation(&d), Ok(()));
        d.steps[0].conclusion = vec![incl(&["x"], &["y"])];
        assert_eq!(fault_of(&d), Some(StepFault::BadPremise));
    }

    #[test]
    fn identity_rewrites_chosen_positions() {
        let problem = Problem::new(
            vec![incl(&["a", "b"], &["c", "c"]), incl(&["a", "a"], &["d", "e"])],
            incl(&["a", "b"], &["d", "e"]),
        )
        .normalize();
        let rule = Rule::Identity {
            from: v("a"),
            to: v("b"),
        };
        let mut d = Derivation {
            problem,
            steps: vec![step(1, vec![incl(&["a", "b"], &["d", "e"])], rule.clone(), &[])],
        };
        assert_eq!(check_derivation(&d), Ok(()));
        d.steps[0].rule = Rule::Identity {
            from: v("b"),
            to: v("a"),
        };
        assert_eq!(fault_of(&d), Some(StepFault::BadPremise));
    }

    #[test]
    fn incl_intro_needs_a_used_column() {
        let mut d = weakening_derivation();
        d.steps[1].rule = Rule::InclIntro {
            column: v("q"),
            fresh: v("d'"),
        };
        d.steps[1].conclusion = vec![incl(&["a", "c'", "d'"], &["a", "c", "q"])];
        assert_eq!(fault_of(&d), Some(StepFault::BadShape));
        let mut d = weakening_derivation();
        d.steps[1].rule = Rule::InclIntro {
            column: v("d"),
            fresh: v("b"),
        };
        d.steps[1].new_vars = vs(&["b"]);
        assert_eq!(fault_of(&d), Some(StepFault::FreshnessViolation));
    }

    #[test]
    fn undeclared_new_variables_are_rejected() {
        let mut d = weakening_derivation();
        d.steps[1].new_vars.clear();
        assert_eq!(fault_of(&d), Some(StepFault::BadShape));
    }

    #[test]
    fn start_axiom_length_checked() {
        let mut d = symmetry_derivation();
        d.steps[0].rule = Rule::StartAxiom {
            shared: vs(&["a"]),
            left: vs(&["c"]),
            right: vs(&["b"]),
            fresh: vs(&["b'", "e'"]),
        };
        d.steps[0].new_vars = vs(&["b'", "e'"]);
        assert_eq!(fault_of(&d), Some(StepFault::LengthMismatch));
    }

    #[test]
    fn conjunction_rules() {
        let problem = Problem::new(
            vec![incl(&["x"], &["y"]), incl(&["y"], &["x"])],
            incl(&["y"], &["x"]),
        )
        .normalize();
        let d = Derivation {
            problem,
            steps: vec![
                step(1, vec![incl(&["x"], &["y"])], Rule::Assume, &[]),
                step(2, vec![incl(&["x"], &["x"])], Rule::Reflexivity, &[]),
                step(
                    3,
                    vec![incl(&["x"], &["y"]), incl(&["x"], &["x"])],
                    Rule::ConjIntro,
                    &[1, 2],
                ),
                step(4, vec![incl(&["x"], &["x"])], Rule::ConjElim, &[3]),
                step(5, vec![incl(&["y"], &["x"])], Rule::Assume, &[]),
            ],
        };
        assert_eq!(check_derivation(&d), Ok(()));
    }
}
