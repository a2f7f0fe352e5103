//! Turns chase witnesses into derivations.
//!
//! Every replayed vertex `u` gets a sequence `X_u` of proof variables, one per
//! problem variable, together with a derived inclusion from (a permutation
//! of) `X_u` into the matching problem variables. Every replayed edge
//! `(u, w)_{ab}` is backed by an equivalence `X_u[a] ≡ X_w[b]`, written as an
//! inclusion `pq ⊆ cc`, unless the two proof variables coincide. The endgame
//! rewrites a projection of the witness sequence into the goal.
//!
//! Only the part of the graph that the witness depends on is replayed.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::atoms::{Atom, NormalProblem, Variable};
use crate::chase::{ChaseGraph, Role, Trigger, VertexId, Witness};
use crate::proof::{Derivation, ProofStep, Rule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("extraction failed: {0}")]
pub struct ExtractionFailure(pub String);

fn failure(msg: impl Into<String>) -> ExtractionFailure {
    ExtractionFailure(msg.into())
}

/// Where a derived atom lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ref {
    Sigma,
    Step(usize),
}

/// A derived inclusion.
#[derive(Debug, Clone)]
struct Incl {
    lhs: Vec<Variable>,
    rhs: Vec<Variable>,
    at: Ref,
}

impl Incl {
    fn atom(&self) -> Atom {
        Atom::Inclusion {
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }
}

fn incl(lhs: Vec<Variable>, rhs: Vec<Variable>) -> Atom {
    Atom::Inclusion { lhs, rhs }
}

/// Generates names `<base>_g<k>` that clash with nothing registered.
struct FreshNames {
    taken: HashSet<Variable>,
    counter: usize,
}

impl FreshNames {
    fn fresh(&mut self, base: &Variable) -> Variable {
        loop {
            let name = format!("{}_g{}", base.name(), self.counter);
            self.counter += 1;
            let v = Variable::new(&name).expect("suffix keeps the identifier class");
            if self.taken.insert(v.clone()) {
                return v;
            }
        }
    }
}

/// Accumulates steps, remembers derived atoms, and derives equivalences.
struct Builder<'p> {
    sigma: &'p [Atom],
    steps: Vec<ProofStep>,
    known: HashMap<Atom, Ref>,
    names: FreshNames,
    eq_direct: HashMap<(Variable, Variable), Atom>,
    eq_adjacent: HashMap<Variable, Vec<Variable>>,
}

impl<'p> Builder<'p> {
    fn new(problem: &'p NormalProblem) -> Self {
        let mut taken: HashSet<Variable> = problem.variables.iter().cloned().collect();
        for a in problem
            .original
            .assumptions
            .iter()
            .chain(core::iter::once(&problem.original.goal))
        {
            taken.extend(a.occurrences().cloned());
        }
        let mut b = Builder {
            sigma: &problem.assumptions,
            steps: Vec::new(),
            known: HashMap::new(),
            names: FreshNames { taken, counter: 0 },
            eq_direct: HashMap::new(),
            eq_adjacent: HashMap::new(),
        };
        for a in b.sigma {
            b.known.entry(a.clone()).or_insert(Ref::Sigma);
            b.note_equivalence(a);
        }
        b
    }

    fn note_equivalence(&mut self, atom: &Atom) {
        if let Atom::Inclusion { lhs, rhs } = atom {
            if lhs.len() == 2 && rhs[0] == rhs[1] && lhs[0] != lhs[1] {
                let key = (lhs[0].clone(), lhs[1].clone());
                if !self.eq_direct.contains_key(&key) {
                    self.eq_direct.insert(key, atom.clone());
                    self.eq_adjacent
                        .entry(lhs[0].clone())
                        .or_default()
                        .push(lhs[1].clone());
                    self.eq_adjacent
                        .entry(lhs[1].clone())
                        .or_default()
                        .push(lhs[0].clone());
                }
            }
        }
    }

    fn emit(&mut self, conclusion: Vec<Atom>, rule: Rule, premises: &[Ref]) -> usize {
        let index = self.steps.len() + 1;
        let mut listed: Vec<usize> = Vec::new();
        for p in premises {
            if let Ref::Step(i) = *p {
                if !listed.contains(&i) {
                    listed.push(i);
                }
            }
        }
        for a in &conclusion {
            self.known.entry(a.clone()).or_insert(Ref::Step(index));
            self.note_equivalence(a);
        }
        self.steps.push(ProofStep {
            index,
            conclusion,
            new_vars: rule.introduced().to_vec(),
            rule,
            premises: listed,
        });
        index
    }

    /// Derives a single atom, reusing an earlier derivation when possible.
    fn fact(&mut self, atom: Atom, rule: Rule, premises: &[Ref]) -> Ref {
        if rule.introduced().is_empty() {
            if let Some(&r) = self.known.get(&atom) {
                return r;
            }
        }
        Ref::Step(self.emit(vec![atom], rule, premises))
    }

    fn reflexive(&mut self, vars: Vec<Variable>) -> Incl {
        let at = self.fact(incl(vars.clone(), vars.clone()), Rule::Reflexivity, &[]);
        Incl {
            lhs: vars.clone(),
            rhs: vars,
            at,
        }
    }

    /// Projects `src` onto 0-based `positions`.
    fn project(&mut self, src: &Incl, positions: &[usize]) -> Incl {
        let lhs: Vec<Variable> = positions.iter().map(|&k| src.lhs[k].clone()).collect();
        let rhs: Vec<Variable> = positions.iter().map(|&k| src.rhs[k].clone()).collect();
        if lhs == rhs {
            return self.reflexive(lhs);
        }
        let identity = positions.len() == src.lhs.len()
            && positions.iter().enumerate().all(|(i, &k)| i == k);
        if identity {
            return src.clone();
        }
        let indices = positions.iter().map(|&k| k + 1).collect();
        let at = self.fact(
            incl(lhs.clone(), rhs.clone()),
            Rule::ProjPerm { indices },
            &[src.at],
        );
        Incl { lhs, rhs, at }
    }

    /// `rest ⊆ known` extended by the column `x ⊆ column` with `x` new.
    fn introduce(&mut self, src: &Incl, fresh: Variable, column: Variable) -> Incl {
        let mut lhs = src.lhs.clone();
        let mut rhs = src.rhs.clone();
        lhs.push(fresh.clone());
        rhs.push(column.clone());
        let at = self.fact(
            incl(lhs.clone(), rhs.clone()),
            Rule::InclIntro { column, fresh },
            &[src.at],
        );
        Incl { lhs, rhs, at }
    }

    fn transitive(&mut self, left: &Incl, right: &Incl) -> Incl {
        let at = self.fact(
            incl(left.lhs.clone(), right.rhs.clone()),
            Rule::Transitivity,
            &[left.at, right.at],
        );
        Incl {
            lhs: left.lhs.clone(),
            rhs: right.rhs.clone(),
            at,
        }
    }

    /// An atom `p q ⊆ c c`, derived from the equivalences found so far.
    fn equivalence(&mut self, p: &Variable, q: &Variable) -> Result<Ref, ExtractionFailure> {
        if let Some(a) = self.eq_direct.get(&(p.clone(), q.clone())) {
            return Ok(self.known[a]);
        }
        let mut prev: HashMap<Variable, Variable> = HashMap::new();
        let mut queue = VecDeque::from([p.clone()]);
        prev.insert(p.clone(), p.clone());
        while let Some(t) = queue.pop_front() {
            if t == *q {
                break;
            }
            for n in self.eq_adjacent.get(&t).into_iter().flatten() {
                if !prev.contains_key(n) {
                    prev.insert(n.clone(), t.clone());
                    queue.push_back(n.clone());
                }
            }
        }
        if !prev.contains_key(q) {
            return Err(failure(format!("no equivalence between {p} and {q}")));
        }
        let mut path = vec![q.clone()];
        while path.last() != Some(p) {
            let next = prev[path.last().unwrap()].clone();
            path.push(next);
        }
        path.reverse();
        let (first, mut at) = self.hop(&path[0], &path[1]);
        let Atom::Inclusion { rhs: c, .. } = first else {
            unreachable!("equivalences are inclusions")
        };
        for w in path[1..].windows(2) {
            let (_, hop_at) = self.hop(&w[0], &w[1]);
            at = self.fact(
                incl(vec![p.clone(), w[1].clone()], c.clone()),
                Rule::Identity {
                    from: w[0].clone(),
                    to: w[1].clone(),
                },
                &[hop_at, at],
            );
        }
        Ok(at)
    }

    /// A single known equivalence step, turned around if needed.
    fn hop(&mut self, p: &Variable, q: &Variable) -> (Atom, Ref) {
        if let Some(a) = self.eq_direct.get(&(p.clone(), q.clone())) {
            return (a.clone(), self.known[a]);
        }
        let back = self.eq_direct[&(q.clone(), p.clone())].clone();
        let Atom::Inclusion { rhs, .. } = &back else {
            unreachable!()
        };
        let atom = incl(vec![p.clone(), q.clone()], rhs.clone());
        let at = self.fact(
            atom.clone(),
            Rule::ProjPerm {
                indices: vec![2, 1],
            },
            &[self.known[&back]],
        );
        (atom, at)
    }

    /// Rewrites the left side of `src` towards `targets` with Identity steps,
    /// one step per distinct replacement.
    fn rewrite(&mut self, src: &Incl, targets: &[Variable]) -> Result<Incl, ExtractionFailure> {
        let mut cur = src.clone();
        for k in 0..targets.len() {
            if cur.lhs[k] == targets[k] {
                continue;
            }
            let (from, to) = (cur.lhs[k].clone(), targets[k].clone());
            let eq = self.equivalence(&from, &to)?;
            let mut lhs = cur.lhs.clone();
            for j in k..lhs.len() {
                if lhs[j] == from && targets[j] == to {
                    lhs[j] = to.clone();
                }
            }
            let at = self.fact(
                incl(lhs.clone(), cur.rhs.clone()),
                Rule::Identity { from, to },
                &[eq, cur.at],
            );
            cur = Incl {
                lhs,
                rhs: cur.rhs,
                at,
            };
        }
        Ok(cur)
    }

    /// Makes `atom` the sole conclusion of some step.
    fn isolate(&mut self, atom: &Atom) -> Result<usize, ExtractionFailure> {
        match self.known.get(atom).copied() {
            Some(Ref::Sigma) => Ok(self.emit(vec![atom.clone()], Rule::Assume, &[])),
            Some(Ref::Step(i)) if self.steps[i - 1].conclusion == [atom.clone()] => Ok(i),
            Some(at) => Ok(self.emit(vec![atom.clone()], Rule::ConjElim, &[at])),
            None => Err(failure(format!("goal {atom} was never derived"))),
        }
    }
}

/// The proof-level view of one vertex.
#[derive(Debug, Clone)]
struct Sequence {
    /// `X_u`, indexed by problem variable.
    x: Vec<Variable>,
    /// The derived inclusion; `None` means `X_u` is the variable sequence
    /// itself and needs no premise.
    base: Option<Incl>,
    /// Column of each problem variable in `base`; may be missing for the
    /// minus vertex until first use.
    pos_of: Vec<Option<usize>>,
}

struct Replay<'b, 'p, 'g> {
    b: &'b mut Builder<'p>,
    g: &'g ChaseGraph,
    vars: &'g [Variable],
    seqs: Vec<Option<Sequence>>,
    start: Option<Ref>,
}

impl Replay<'_, '_, '_> {
    fn var_index(&self, v: &Variable) -> Result<usize, ExtractionFailure> {
        self.g
            .variable_index(v)
            .ok_or_else(|| failure(format!("unknown variable {v}")))
    }

    fn indices(&self, t: &[Variable]) -> Result<Vec<usize>, ExtractionFailure> {
        t.iter().map(|v| self.var_index(v)).collect()
    }

    fn seq(&self, v: VertexId) -> Result<&Sequence, ExtractionFailure> {
        self.seqs[v.index()]
            .as_ref()
            .ok_or_else(|| failure(format!("vertex {v} was not replayed")))
    }

    fn x(&self, v: VertexId, i: usize) -> Result<Variable, ExtractionFailure> {
        Ok(self.seq(v)?.x[i].clone())
    }

    /// Derives `X_v[idx] ⊆ x[idx]`.
    fn project(&mut self, v: VertexId, idx: &[usize]) -> Result<Incl, ExtractionFailure> {
        let seq = self.seq(v)?.clone();
        let lhs: Vec<Variable> = idx.iter().map(|&i| seq.x[i].clone()).collect();
        let rhs: Vec<Variable> = idx.iter().map(|&i| self.vars[i].clone()).collect();
        if lhs == rhs {
            return Ok(self.b.reflexive(lhs));
        }
        let target = incl(lhs.clone(), rhs.clone());
        if let Some(&at) = self.b.known.get(&target) {
            return Ok(Incl { lhs, rhs, at });
        }
        let Some(mut base) = seq.base.clone() else {
            return Err(failure("reflexive sequence with a non-reflexive projection"));
        };
        let mut pos_of = seq.pos_of.clone();
        for &i in idx {
            if pos_of[i].is_none() {
                base = self
                    .b
                    .introduce(&base, seq.x[i].clone(), self.vars[i].clone());
                pos_of[i] = Some(base.lhs.len() - 1);
            }
        }
        let positions: Vec<usize> = idx.iter().map(|&i| pos_of[i].unwrap()).collect();
        let out = self.b.project(&base, &positions);
        let s = self.seqs[v.index()].as_mut().unwrap();
        s.base = Some(base);
        s.pos_of = pos_of;
        Ok(out)
    }

    fn finish_sequence(&mut self, mut cur: Incl, rhs_idx: Vec<usize>) -> Sequence {
        let n = self.vars.len();
        let mut first_of: Vec<Option<usize>> = vec![None; n];
        let mut keep: Vec<usize> = Vec::new();
        for (k, &j) in rhs_idx.iter().enumerate() {
            if first_of[j].is_none() {
                first_of[j] = Some(keep.len());
                keep.push(k);
            }
        }
        if keep.len() != cur.lhs.len() {
            cur = self.b.project(&cur, &keep);
        }
        for (slot, var) in first_of.iter_mut().zip(self.vars) {
            if slot.is_none() {
                let fresh = self.b.names.fresh(var);
                cur = self.b.introduce(&cur, fresh, var.clone());
                *slot = Some(cur.lhs.len() - 1);
            }
        }
        let x = (0..n).map(|i| cur.lhs[first_of[i].unwrap()].clone()).collect();
        Sequence {
            x,
            base: Some(cur),
            pos_of: first_of,
        }
    }

    /// Equivalences for columns of `cur` whose right-hand variables repeat.
    fn align_repeats(&mut self, cur: &Incl, rhs_idx: &[usize]) {
        for k in 0..rhs_idx.len() {
            if let Some(k0) = rhs_idx[..k].iter().position(|&j| j == rhs_idx[k]) {
                if cur.lhs[k] != cur.lhs[k0] {
                    self.b.project(cur, &[k, k0]);
                }
            }
        }
    }

    fn setup_level_zero(&mut self) -> Result<(), ExtractionFailure> {
        let n = self.vars.len();
        let reflexive = Sequence {
            x: self.vars.to_vec(),
            base: None,
            pos_of: (0..n).map(Some).collect(),
        };
        self.seqs[0] = Some(reflexive.clone());
        if let Atom::Independence { cond, left, right } = self.g.goal() {
            let fresh: Vec<Variable> = right.iter().map(|c| self.b.names.fresh(c)).collect();
            let cat = |a: &[Variable], b: &[Variable]| [a, b].concat();
            let conj3 = Incl {
                lhs: cat(cond, &fresh),
                rhs: cat(cond, right),
                at: Ref::Sigma,
            };
            let step = self.b.emit(
                vec![
                    incl(cat(cond, right), cat(cond, &fresh)),
                    Atom::independence(cond.clone(), left.clone(), fresh.clone()),
                    conj3.atom(),
                ],
                Rule::StartAxiom {
                    shared: cond.clone(),
                    left: left.clone(),
                    right: right.clone(),
                    fresh: fresh.clone(),
                },
                &[],
            );
            self.start = Some(Ref::Step(step));
            let conj3 = Incl {
                at: Ref::Step(step),
                ..conj3
            };
            let mut x: Vec<Option<Variable>> = vec![None; n];
            let mut pos_of = vec![None; n];
            for (k, v) in conj3.rhs.iter().enumerate() {
                let i = self.var_index(v)?;
                if x[i].is_none() {
                    x[i] = Some(conj3.lhs[k].clone());
                    pos_of[i] = Some(k);
                }
            }
            let x = (0..n)
                .map(|i| x[i].take().unwrap_or_else(|| self.b.names.fresh(&self.vars[i])))
                .collect();
            self.seqs[1] = Some(Sequence {
                x,
                base: Some(conj3),
                pos_of,
            });
        }
        Ok(())
    }

    fn replay(&mut self, v: VertexId) -> Result<(), ExtractionFailure> {
        let trigger = self
            .g
            .vertex(v)
            .trigger
            .ok_or_else(|| failure("level-0 vertex has no trigger"))?;
        let atom = self
            .g
            .assumptions()
            .get(trigger.atom())
            .cloned()
            .ok_or_else(|| failure("trigger names a missing assumption"))?;
        let seq = match (trigger, &atom) {
            (Trigger::Inclusion { vertex: u, .. }, Atom::Inclusion { lhs, rhs }) => {
                let (i_idx, j_idx) = (self.indices(lhs)?, self.indices(rhs)?);
                let from_u = self.project(u, &i_idx)?;
                let rule = Incl {
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                    at: self.b.known[&atom],
                };
                let mut cur = if from_u.lhs == *lhs {
                    rule
                } else {
                    self.b.transitive(&from_u, &rule)
                };
                for k in 0..cur.lhs.len() {
                    let p = cur.lhs[k].clone();
                    let y = self.b.names.fresh(&self.vars[j_idx[k]]);
                    let refl = self.b.reflexive(vec![p.clone()]);
                    let eq = self.b.introduce(&refl, y.clone(), p.clone());
                    let mut next = cur.lhs.clone();
                    next[k] = y.clone();
                    let at = self.b.fact(
                        incl(next.clone(), cur.rhs.clone()),
                        Rule::Identity { from: p, to: y },
                        &[eq.at, cur.at],
                    );
                    cur = Incl {
                        lhs: next,
                        rhs: cur.rhs,
                        at,
                    };
                }
                self.align_repeats(&cur, &j_idx);
                self.finish_sequence(cur, j_idx)
            }
            (
                Trigger::Independence {
                    first: u,
                    second: w,
                    ..
                },
                Atom::Independence { cond, left, right },
            ) => {
                let (p, q, r) = (
                    self.indices(cond)?,
                    self.indices(left)?,
                    self.indices(right)?,
                );
                let pr = [&p[..], &r].concat();
                let pq = [&p[..], &q].concat();
                let labello = self.project(w, &pr)?;
                let label = self.project(u, &pq)?;
                let mut targets = labello.lhs.clone();
                for (k, &i) in p.iter().enumerate() {
                    targets[k] = self.x(u, i)?;
                }
                let labello = self.b.rewrite(&labello, &targets)?;
                let lhs = [&label.lhs[..], &labello.lhs[p.len()..]].concat();
                let rhs = [cond.as_slice(), left, right].concat();
                let at = self.b.fact(
                    incl(lhs.clone(), rhs.clone()),
                    Rule::ChaseRule,
                    &[label.at, labello.at],
                );
                let cur = Incl { lhs, rhs, at };
                let rhs_idx = [&pq[..], &r].concat();
                self.align_repeats(&cur, &rhs_idx);
                self.finish_sequence(cur, rhs_idx)
            }
            _ => return Err(failure("trigger kind does not match its assumption")),
        };
        self.seqs[v.index()] = Some(seq);
        Ok(())
    }

    fn endgame(&mut self, witness: Witness) -> Result<Atom, ExtractionFailure> {
        let goal = self.g.goal().clone();
        match (&goal, witness) {
            (Atom::Inclusion { lhs, rhs }, Witness::Inclusion(w)) => {
                if lhs == rhs {
                    self.b.reflexive(lhs.clone());
                    return Ok(goal);
                }
                let b_idx = self.indices(rhs)?;
                let cur = self.project(w, &b_idx)?;
                self.b.rewrite(&cur, lhs)?;
            }
            (Atom::Independence { cond, left, right }, Witness::Independence(v)) => {
                let idx = self.indices(&[cond.as_slice(), left, right].concat())?;
                let cur = self.project(v, &idx)?;
                let mut targets = Vec::with_capacity(idx.len());
                targets.extend(cond.iter().chain(left).cloned());
                for c in right {
                    targets.push(self.x(VertexId(1), self.var_index(c)?)?);
                }
                let cur = self.b.rewrite(&cur, &targets)?;
                let start = self.start.ok_or_else(|| failure("start axiom missing"))?;
                self.b.fact(goal.clone(), Rule::FinalRule, &[start, cur.at]);
            }
            _ => return Err(failure("witness kind does not match the goal")),
        }
        Ok(goal)
    }
}

/// The vertices a witness depends on: the witness, the endpoints and owners
/// of the edges on its connecting paths, and recursively the sources and
/// condition paths of their triggers.
fn cone(g: &ChaseGraph, witness: Witness) -> Result<Vec<bool>, ExtractionFailure> {
    let n = g.variables().len();
    let nv = g.vertices().len();
    let cell = |v: VertexId, a: usize| v.index() * n + a;
    let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv * n];
    for (e, edge) in g.edges().iter().enumerate() {
        adjacent[cell(edge.u, edge.a)].push((cell(edge.w, edge.b), e));
        adjacent[cell(edge.w, edge.b)].push((cell(edge.u, edge.a), e));
    }
    let path = |from: usize, to: usize, max_level: u32| -> Option<Vec<usize>> {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen: HashSet<usize> = HashSet::from_iter([from]);
        while let Some(c) = queue.pop_front() {
            if c == to {
                let mut edges = Vec::new();
                let mut at = to;
                while at != from {
                    let (p, e) = prev[&at];
                    edges.push(e);
                    at = p;
                }
                return Some(edges);
            }
            for &(d, e) in &adjacent[c] {
                if g.edges()[e].level <= max_level && seen.insert(d) {
                    prev.insert(d, (c, e));
                    queue.push_back(d);
                }
            }
        }
        None
    };

    let mut needed = vec![false; nv];
    let mut pending: Vec<VertexId> = Vec::new();
    let mark = |v: VertexId, needed: &mut [bool], pending: &mut Vec<VertexId>| {
        if !needed[v.index()] {
            needed[v.index()] = true;
            pending.push(v);
        }
    };
    let mut requirements: Vec<(usize, usize, u32)> = Vec::new();
    let any = u32::MAX;
    let idx = |vs: &[Variable]| -> Vec<usize> {
        vs.iter().map(|v| g.variable_index(v).unwrap()).collect()
    };
    mark(witness.vertex(), &mut needed, &mut pending);
    match (g.goal(), witness) {
        (Atom::Inclusion { lhs, rhs }, Witness::Inclusion(w)) => {
            for (a, b) in idx(lhs).into_iter().zip(idx(rhs)) {
                requirements.push((cell(VertexId(0), a), cell(w, b), any));
            }
        }
        (Atom::Independence { cond, left, right }, Witness::Independence(v)) => {
            for b in idx(cond).into_iter().chain(idx(left)) {
                requirements.push((cell(VertexId(0), b), cell(v, b), any));
            }
            for c in idx(cond).into_iter().chain(idx(right)) {
                requirements.push((cell(VertexId(1), c), cell(v, c), any));
            }
        }
        _ => return Err(failure("witness kind does not match the goal")),
    }
    loop {
        while let Some((from, to, level)) = requirements.pop() {
            let edges = path(from, to, level)
                .ok_or_else(|| failure("witness connection has no path"))?;
            for e in edges {
                let edge = g.edges()[e];
                mark(edge.u, &mut needed, &mut pending);
                mark(edge.w, &mut needed, &mut pending);
                if let Some(o) = edge.owner {
                    mark(o, &mut needed, &mut pending);
                }
            }
        }
        let Some(v) = pending.pop() else { break };
        let vertex = g.vertex(v);
        match vertex.trigger {
            None => {}
            Some(Trigger::Inclusion { vertex: u, .. }) => mark(u, &mut needed, &mut pending),
            Some(Trigger::Independence {
                first,
                second,
                atom,
            }) => {
                mark(first, &mut needed, &mut pending);
                mark(second, &mut needed, &mut pending);
                if let Some(Atom::Independence { cond, .. }) = g.assumptions().get(atom) {
                    for p in idx(cond) {
                        requirements.push((cell(first, p), cell(second, p), vertex.level - 1));
                    }
                }
            }
        }
    }
    Ok(needed)
}

/// Builds a derivation of the problem's goal conjunction from one chase
/// witness per goal conjunct (in goal order).
pub fn extract_derivation(
    problem: &NormalProblem,
    witnesses: &[(&ChaseGraph, Witness)],
) -> Result<Derivation, ExtractionFailure> {
    if witnesses.len() != problem.goals.len() {
        return Err(failure("need exactly one witness per goal conjunct"));
    }
    let mut b = Builder::new(problem);
    for (k, &(g, witness)) in witnesses.iter().enumerate() {
        if g.goal() != &problem.goals[k] || g.assumptions() != problem.assumptions.as_slice() {
            return Err(failure("chase graph belongs to a different query"));
        }
        if b.known.get(g.goal()) == Some(&Ref::Sigma) {
            continue;
        }
        let needed = cone(g, witness)?;
        let mut replay = Replay {
            b: &mut b,
            g,
            vars: g.variables(),
            seqs: vec![None; g.vertices().len()],
            start: None,
        };
        replay.setup_level_zero()?;
        for (i, &need) in needed.iter().enumerate() {
            let v = VertexId(i as u32);
            if need && g.vertex(v).role == Role::Chased {
                replay.replay(v)?;
            }
        }
        replay.endgame(witness)?;
    }

    let goals = &problem.goals;
    let done = b.steps.last().is_some_and(|s| s.conclusion == *goals);
    if !done {
        if let [goal] = goals.as_slice() {
            match b.known.get(goal).copied() {
                Some(Ref::Sigma) => b.emit(vec![goal.clone()], Rule::Assume, &[]),
                Some(at) => b.emit(vec![goal.clone()], Rule::ConjElim, &[at]),
                None => return Err(failure(format!("goal {goal} was never derived"))),
            };
        } else {
            let parts = goals
                .iter()
                .map(|g| b.isolate(g).map(Ref::Step))
                .collect::<Result<Vec<_>, _>>()?;
            b.emit(goals.clone(), Rule::ConjIntro, &parts);
        }
    }
    Ok(Derivation {
        problem: problem.clone(),
        steps: b.steps,
    })
}
