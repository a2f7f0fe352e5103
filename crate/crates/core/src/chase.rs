//! The chase graph.
//!
//! Vertices stand for abstract rows. An edge `(u, w)_{ab}` states that the
//! `a`-cell of `u` equals the `b`-cell of `w`, and the partition over cells
//! `(vertex, variable)` is the reflexive, symmetric and transitive closure of
//! those statements. A goal is implied when some vertex realizes its pattern;
//! when no trigger is left to fire, the graph itself is a counterexample.

use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

use crate::atoms::{Atom, Query, Variable};
use crate::team::{Team, Value};
use crate::unionfind::DisjointSets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// The single level-0 vertex of an inclusion goal.
    Root,
    /// The level-0 vertex carrying the left side of an independence goal.
    Plus,
    /// The level-0 vertex carrying the right side of an independence goal.
    Minus,
    Chased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trigger {
    Inclusion {
        vertex: VertexId,
        atom: usize,
    },
    Independence {
        first: VertexId,
        second: VertexId,
        atom: usize,
    },
}

impl Trigger {
    pub fn atom(&self) -> usize {
        match *self {
            Trigger::Inclusion { atom, .. } | Trigger::Independence { atom, .. } => atom,
        }
    }

    fn order_key(&self) -> (u32, usize, Option<u32>) {
        match *self {
            Trigger::Inclusion { vertex, atom } => (vertex.0, atom, None),
            Trigger::Independence {
                first,
                second,
                atom,
            } => (first.0, atom, Some(second.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub role: Role,
    pub level: u32,
    pub trigger: Option<Trigger>,
}

/// `(u, w)_{ab}` with `a`, `b` as positions in the variable sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledEdge {
    pub u: VertexId,
    pub w: VertexId,
    pub a: usize,
    pub b: usize,
    pub level: u32,
    /// The vertex whose creation added this edge; `None` at level 0.
    pub owner: Option<VertexId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Inclusion(VertexId),
    Independence(VertexId),
}

impl Witness {
    pub fn vertex(self) -> VertexId {
        match self {
            Witness::Inclusion(v) | Witness::Independence(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChaseBounds {
    pub max_depth: u32,
    pub max_vertices: usize,
}

impl Default for ChaseBounds {
    fn default() -> Self {
        ChaseBounds {
            max_depth: 6,
            max_vertices: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChaseError {
    #[error("goal `{0}` is not in normal form")]
    UnnormalizedGoal(Atom),
    #[error("assumption `{0}` is not in normal form")]
    UnnormalizedAssumption(Atom),
    #[error("variable `{0}` is missing from the variable sequence")]
    UnknownVariable(Variable),
    #[error("next level needs {needed} vertices, cap is {cap}")]
    VertexBudgetExceeded { needed: usize, cap: usize },
    #[error("graph still has enabled triggers")]
    NotSaturated,
}

#[derive(Debug, Clone)]
pub enum ChaseOutcome {
    WitnessFound {
        graph: ChaseGraph,
        witness: Witness,
        depth: u32,
    },
    Saturated {
        graph: ChaseGraph,
        depth: u32,
    },
    BoundsExhausted {
        graph: ChaseGraph,
        depth: u32,
    },
}

impl ChaseOutcome {
    pub fn graph(&self) -> &ChaseGraph {
        match self {
            ChaseOutcome::WitnessFound { graph, .. }
            | ChaseOutcome::Saturated { graph, .. }
            | ChaseOutcome::BoundsExhausted { graph, .. } => graph,
        }
    }

    pub fn depth(&self) -> u32 {
        match *self {
            ChaseOutcome::WitnessFound { depth, .. }
            | ChaseOutcome::Saturated { depth, .. }
            | ChaseOutcome::BoundsExhausted { depth, .. } => depth,
        }
    }

    pub fn witness(&self) -> Option<Witness> {
        match *self {
            ChaseOutcome::WitnessFound { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Rule {
    Inclusion {
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    Independence {
        cond: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
    },
}

impl Rule {
    fn compile(atom: &Atom, vars: &[Variable]) -> Result<Rule, ChaseError> {
        let idx = |t: &[Variable]| -> Result<Vec<usize>, ChaseError> {
            t.iter()
                .map(|v| {
                    vars.iter()
                        .position(|x| x == v)
                        .ok_or_else(|| ChaseError::UnknownVariable(v.clone()))
                })
                .collect()
        };
        match atom {
            Atom::Inclusion { lhs, rhs } => Ok(Rule::Inclusion {
                lhs: idx(lhs)?,
                rhs: idx(rhs)?,
            }),
            Atom::Independence { cond, left, right } => Ok(Rule::Independence {
                cond: idx(cond)?,
                left: idx(left)?,
                right: idx(right)?,
            }),
            Atom::Dependence { .. } => unreachable!("checked by the caller"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChaseGraph {
    variables: Vec<Variable>,
    assumptions: Vec<Atom>,
    goal: Atom,
    rules: Vec<Rule>,
    goal_rule: Rule,
    vertices: Vec<Vertex>,
    edges: Vec<LabeledEdge>,
    cells: DisjointSets,
    fired: Vec<Trigger>,
    fired_pairs: HashSet<(usize, u32, u32)>,
    fired_per_rule: Vec<usize>,
    inclusion_frontier: usize,
    depth: u32,
    vertex_cap: usize,
}

/// Work the next level would do.
struct Pending {
    count: usize,
    groups: Vec<(usize, Vec<Vec<u32>>)>,
}

impl ChaseGraph {
    /// Builds the level-0 graph for one core query.
    pub fn for_query(q: Query<'_>) -> Result<ChaseGraph, ChaseError> {
        if matches!(q.goal, Atom::Dependence { .. }) || !q.goal.is_core_normal() {
            return Err(ChaseError::UnnormalizedGoal(q.goal.clone()));
        }
        let mut rules = Vec::with_capacity(q.assumptions.len());
        for a in q.assumptions {
            if matches!(a, Atom::Dependence { .. }) || !a.is_core_normal() {
                return Err(ChaseError::UnnormalizedAssumption(a.clone()));
            }
            rules.push(Rule::compile(a, q.variables)?);
        }
        let goal_rule = Rule::compile(q.goal, q.variables)?;
        let mut g = ChaseGraph {
            variables: q.variables.to_vec(),
            assumptions: q.assumptions.to_vec(),
            goal: q.goal.clone(),
            fired_per_rule: alloc::vec![0; rules.len()],
            rules,
            goal_rule,
            vertices: Vec::new(),
            edges: Vec::new(),
            cells: DisjointSets::new(),
            fired: Vec::new(),
            fired_pairs: HashSet::new(),
            inclusion_frontier: 0,
            depth: 0,
            vertex_cap: ChaseBounds::default().max_vertices,
        };
        match g.goal_rule.clone() {
            Rule::Inclusion { .. } => {
                g.push_vertex(Role::Root, None);
            }
            Rule::Independence { cond, .. } => {
                let plus = g.push_vertex(Role::Plus, None);
                let minus = g.push_vertex(Role::Minus, None);
                for a in cond {
                    g.push_edge(plus, minus, a, a, None);
                }
            }
        }
        Ok(g)
    }

    /// Builds the level-0 graph for a problem whose goal is already a core atom.
    pub fn new(p: &crate::atoms::Problem) -> Result<ChaseGraph, ChaseError> {
        let variables = p.variables();
        ChaseGraph::for_query(Query {
            variables: &variables,
            assumptions: &p.assumptions,
            goal: &p.goal,
        })
    }

    pub fn set_vertex_cap(&mut self, cap: usize) {
        self.vertex_cap = cap;
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn assumptions(&self) -> &[Atom] {
        &self.assumptions
    }

    pub fn goal(&self) -> &Atom {
        &self.goal
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.index()]
    }

    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    /// Triggers in firing order.
    pub fn fired(&self) -> &[Trigger] {
        &self.fired
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn variable_index(&self, v: &Variable) -> Option<usize> {
        self.variables.iter().position(|x| x == v)
    }

    fn cell(&self, v: VertexId, var: usize) -> u32 {
        (v.index() * self.variables.len() + var) as u32
    }

    fn push_vertex(&mut self, role: Role, trigger: Option<Trigger>) -> VertexId {
        let id = VertexId(self.vertices.len() as u32);
        let level = if trigger.is_some() { self.depth + 1 } else { 0 };
        self.vertices.push(Vertex {
            role,
            level,
            trigger,
        });
        self.cells.grow(self.variables.len());
        id
    }

    fn push_edge(&mut self, u: VertexId, w: VertexId, a: usize, b: usize, owner: Option<VertexId>) {
        let level = owner.map_or(0, |o| self.vertices[o.index()].level);
        self.edges.push(LabeledEdge {
            u,
            w,
            a,
            b,
            level,
            owner,
        });
        let (cu, cw) = (self.cell(u, a), self.cell(w, b));
        self.cells.union(cu, cw);
    }

    /// `u ∼_{ab} w` by variable position.
    pub fn connected_at(&self, u: VertexId, a: usize, w: VertexId, b: usize) -> bool {
        self.cells.same(self.cell(u, a), self.cell(w, b))
    }

    /// `u ∼_{ab} w`. Unknown variables are never connected.
    pub fn connected(&self, u: VertexId, a: &Variable, w: VertexId, b: &Variable) -> bool {
        match (self.variable_index(a), self.variable_index(b)) {
            (Some(a), Some(b)) => self.connected_at(u, a, w, b),
            _ => false,
        }
    }

    /// Identifier of the partition class of cell `(v, var)`.
    pub fn class_of(&self, v: VertexId, var: usize) -> u32 {
        self.cells.find(self.cell(v, var))
    }

    fn pending(&self) -> Pending {
        let fresh = self.vertices.len() - self.inclusion_frontier;
        let mut count = 0usize;
        let mut groups = Vec::new();
        for (k, rule) in self.rules.iter().enumerate() {
            match rule {
                Rule::Inclusion { .. } => count += fresh,
                Rule::Independence { cond, .. } => {
                    let mut by_key: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
                    for v in 0..self.vertices.len() as u32 {
                        let key = cond
                            .iter()
                            .map(|&c| self.class_of(VertexId(v), c))
                            .collect();
                        by_key.entry(key).or_default().push(v);
                    }
                    let mut gs: Vec<Vec<u32>> = by_key.into_values().collect();
                    gs.sort_unstable();
                    let pairs: usize = gs.iter().map(|g| g.len() * (g.len() - 1)).sum();
                    count += pairs - self.fired_per_rule[k];
                    groups.push((k, gs));
                }
            }
        }
        Pending { count, groups }
    }

    /// Number of enabled triggers that have not fired yet.
    pub fn pending_triggers(&self) -> usize {
        self.pending().count
    }

    pub fn is_saturated(&self) -> bool {
        self.pending_triggers() == 0
    }

    /// Fires every enabled, unfired trigger once and returns the number of
    /// vertices added. On `VertexBudgetExceeded` the graph is unchanged.
    pub fn expand_level(&mut self) -> Result<usize, ChaseError> {
        let Pending { count, groups } = self.pending();
        let old_len = self.vertices.len();
        if old_len + count > self.vertex_cap {
            return Err(ChaseError::VertexBudgetExceeded {
                needed: old_len + count,
                cap: self.vertex_cap,
            });
        }
        if count == 0 {
            return Ok(0);
        }
        let mut triggers = Vec::with_capacity(count);
        for v in self.inclusion_frontier..old_len {
            for (k, rule) in self.rules.iter().enumerate() {
                if let Rule::Inclusion { .. } = rule {
                    triggers.push(Trigger::Inclusion {
                        vertex: VertexId(v as u32),
                        atom: k,
                    });
                }
            }
        }
        for (k, gs) in &groups {
            for g in gs {
                for &u in g {
                    for &w in g {
                        if u != w && !self.fired_pairs.contains(&(*k, u, w)) {
                            triggers.push(Trigger::Independence {
                                first: VertexId(u),
                                second: VertexId(w),
                                atom: *k,
                            });
                        }
                    }
                }
            }
        }
        debug_assert_eq!(triggers.len(), count);
        triggers.sort_unstable_by_key(Trigger::order_key);
        for t in triggers {
            self.fire(t);
        }
        self.inclusion_frontier = old_len;
        self.depth += 1;
        Ok(count)
    }

    fn fire(&mut self, t: Trigger) {
        let new = self.push_vertex(Role::Chased, Some(t));
        match (t, self.rules[t.atom()].clone()) {
            (Trigger::Inclusion { vertex, .. }, Rule::Inclusion { lhs, rhs }) => {
                for (&x, &y) in lhs.iter().zip(&rhs) {
                    self.push_edge(vertex, new, x, y, Some(new));
                }
            }
            (
                Trigger::Independence {
                    first,
                    second,
                    atom,
                },
                Rule::Independence { cond, left, right },
            ) => {
                for &y in cond.iter().chain(&left) {
                    self.push_edge(first, new, y, y, Some(new));
                }
                for &z in cond.iter().chain(&right) {
                    self.push_edge(second, new, z, z, Some(new));
                }
                self.fired_pairs.insert((atom, first.0, second.0));
                self.fired_per_rule[atom] += 1;
            }
            _ => unreachable!("trigger kind matches its rule"),
        }
        self.fired.push(t);
    }

    /// The least vertex realizing the goal pattern, if any.
    pub fn find_witness(&self) -> Option<Witness> {
        let all = (0..self.vertices.len() as u32).map(VertexId);
        match &self.goal_rule {
            Rule::Inclusion { lhs, rhs } => {
                let root = VertexId(0);
                all.into_iter()
                    .find(|&w| {
                        lhs.iter()
                            .zip(rhs)
                            .all(|(&a, &b)| self.connected_at(root, a, w, b))
                    })
                    .map(Witness::Inclusion)
            }
            Rule::Independence { cond, left, right } => {
                let (plus, minus) = (VertexId(0), VertexId(1));
                all.into_iter()
                    .find(|&v| {
                        cond.iter()
                            .chain(left)
                            .all(|&b| self.connected_at(plus, b, v, b))
                            && cond
                                .iter()
                                .chain(right)
                                .all(|&c| self.connected_at(minus, c, v, c))
                    })
                    .map(Witness::Independence)
            }
        }
    }

    /// The team `{s_u}` with `s_u(x)` the class of cell `(u, x)`, so that
    /// `s_u(x) = s_w(y)` iff `u ∼_{xy} w`.
    pub fn team_from_saturated_graph(&self) -> Result<Team, ChaseError> {
        if !self.is_saturated() {
            return Err(ChaseError::NotSaturated);
        }
        let mut ids: HashMap<u32, u32> = HashMap::new();
        let rows = (0..self.vertices.len() as u32)
            .map(|v| {
                (0..self.variables.len())
                    .map(|x| {
                        let root = self.class_of(VertexId(v), x);
                        let next = ids.len() as u32;
                        Value(*ids.entry(root).or_insert(next))
                    })
                    .collect()
            })
            .collect();
        Ok(Team::new(self.variables.clone(), rows).expect("rows span the variable sequence"))
    }
}

/// Chases level by level until a witness appears, the graph saturates, or a
/// bound is hit. The witness test runs after initialization and after every
/// level.
pub fn run_chase(q: Query<'_>, bounds: ChaseBounds) -> Result<ChaseOutcome, ChaseError> {
    let mut graph = ChaseGraph::for_query(q)?;
    graph.set_vertex_cap(bounds.max_vertices.max(graph.vertices.len()));
    loop {
        let depth = graph.depth;
        if let Some(witness) = graph.find_witness() {
            return Ok(ChaseOutcome::WitnessFound {
                graph,
                witness,
                depth,
            });
        }
        if depth >= bounds.max_depth {
            return Ok(if graph.is_saturated() {
                ChaseOutcome::Saturated { graph, depth }
            } else {
                ChaseOutcome::BoundsExhausted { graph, depth }
            });
        }
        match graph.expand_level() {
            Ok(0) => return Ok(ChaseOutcome::Saturated { graph, depth }),
            Ok(_) => {}
            Err(ChaseError::VertexBudgetExceeded { .. }) => {
                return Ok(ChaseOutcome::BoundsExhausted { graph, depth })
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::tests::{incl, indep, v, vs};
    use crate::atoms::Problem;
    use crate::team::{satisfies_atom, satisfies_set};
    use alloc::vec;

    fn graph(sigma: &[Atom], goal: Atom) -> ChaseGraph {
        ChaseGraph::new(&Problem::new(sigma.to_vec(), goal)).unwrap()
    }

    fn chase(sigma: &[Atom], goal: Atom, depth: u32) -> ChaseOutcome {
        let p = Problem::new(sigma.to_vec(), goal);
        let vars = p.variables();
        run_chase(
            Query {
                variables: &vars,
                assumptions: &p.assumptions,
                goal: &p.goal,
            },
            ChaseBounds {
                max_depth: depth,
                ..ChaseBounds::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn level_zero_shapes() {
        let g = graph(&[], incl(&["x"], &["y"]));
        assert_eq!(g.vertices().len(), 1);
        assert_eq!(g.vertex(VertexId(0)).role, Role::Root);
        assert!(g.edges().is_empty());

        let g = graph(&[], indep(&["a"], &["b"], &["c"]));
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.edges().len(), 1);
        assert!(g.connected(VertexId(0), &v("a"), VertexId(1), &v("a")));
        assert!(!g.connected(VertexId(0), &v("b"), VertexId(1), &v("b")));

        let g = graph(&[], indep(&[], &["b"], &["c"]));
        assert!(g.edges().is_empty());
    }

    #[test]
    fn overlapping_goal_is_rejected() {
        let p = Problem::new(vec![], indep(&["x"], &["x", "y"], &["z"]));
        assert!(matches!(
            ChaseGraph::new(&p),
            Err(ChaseError::UnnormalizedGoal(_))
        ));
        let p = Problem::new(vec![], crate::atoms::tests::dep(&["x"], "y"));
        assert!(matches!(
            ChaseGraph::new(&p),
            Err(ChaseError::UnnormalizedGoal(_))
        ));
    }

    #[test]
    fn reflexive_connection_and_paths() {
        let g = graph(&[incl(&["x"], &["y"])], incl(&["y"], &["x"]));
        let root = VertexId(0);
        assert!(g.connected(root, &v("x"), root, &v("x")));
        assert!(!g.connected(root, &v("x"), root, &v("y")));
    }

    #[test]
    fn one_inclusion_step() {
        let mut g = graph(&[incl(&["x"], &["y"])], incl(&["y"], &["x"]));
        assert_eq!(g.expand_level().unwrap(), 1);
        let e = g.edges()[0];
        assert_eq!((e.u, e.w, e.a, e.b), (VertexId(0), VertexId(1), 0, 1));
    }

    #[test]
    fn independence_fires_both_orientations() {
        let mut g = graph(&[indep(&["a"], &["b"], &["c"])], indep(&["a"], &["c"], &["b"]));
        assert_eq!(g.expand_level().unwrap(), 2);
        assert_eq!(
            g.fired()[0],
            Trigger::Independence {
                first: VertexId(0),
                second: VertexId(1),
                atom: 0
            }
        );
    }

    #[test]
    fn empty_sigma_saturates_immediately() {
        let mut g = graph(&[], incl(&["x"], &["y"]));
        assert_eq!(g.expand_level().unwrap(), 0);
        assert!(g.is_saturated());
    }

    #[test]
    fn symmetry_witness_at_depth_one() {
        let out = chase(&[indep(&["a"], &["b"], &["c"])], indep(&["a"], &["c"], &["b"]), 2);
        assert!(matches!(out, ChaseOutcome::WitnessFound { depth: 1, .. }));
    }

    #[test]
    fn saturation_and_bounds() {
        let out = chase(&[], incl(&["x"], &["y"]), 6);
        assert!(matches!(out, ChaseOutcome::Saturated { depth: 0, .. }));
        let out = chase(&[incl(&["x"], &["y"])], incl(&["y"], &["x"]), 3);
        assert!(matches!(out, ChaseOutcome::BoundsExhausted { depth: 3, .. }));
    }

    #[test]
    fn saturated_teams_are_counterexamples() {
        let out = chase(&[], incl(&["x"], &["y"]), 6);
        let t = out.graph().team_from_saturated_graph().unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.domain(), &vs(&["x", "y"])[..]);
        assert_ne!(t.rows()[0][0], t.rows()[0][1]);

        let goal = indep(&[], &["b"], &["c"]);
        let out = chase(&[], goal.clone(), 6);
        let t = out.graph().team_from_saturated_graph().unwrap();
        assert_eq!(t.len(), 2);
        let mut values: Vec<Value> = t.rows().concat();
        values.sort();
        values.dedup();
        assert_eq!(values.len(), 4);
        assert!(satisfies_set(&t, &[]).unwrap());
        assert!(!satisfies_atom(&t, &goal).unwrap());
    }

    #[test]
    fn unsaturated_graph_has_no_team() {
        let g = graph(&[incl(&["x"], &["y"])], incl(&["y"], &["x"]));
        assert_eq!(g.team_from_saturated_graph(), Err(ChaseError::NotSaturated));
    }

    #[test]
    fn budget_leaves_graph_untouched() {
        let mut g = graph(&[indep(&[], &["x"], &["y"])], indep(&[], &["y"], &["x"]));
        g.set_vertex_cap(3);
        let before = (g.vertices().len(), g.edges().len());
        assert!(matches!(
            g.expand_level(),
            Err(ChaseError::VertexBudgetExceeded { needed: 4, cap: 3 })
        ));
        assert_eq!(before, (g.vertices().len(), g.edges().len()));
    }
}
