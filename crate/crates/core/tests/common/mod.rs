#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use incind_core::atoms::{Atom, Problem, Variable};
use incind_core::chase::{ChaseGraph, VertexId};
use incind_core::team::{Team, Value};
use proptest::prelude::*;
use rand::Rng;

pub const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn var(i: usize) -> Variable {
    Variable::new(NAMES[i]).unwrap()
}

pub fn tuple_strategy(vars: usize, max_len: usize) -> impl Strategy<Value = Vec<Variable>> {
    prop::collection::vec(0..vars, 0..=max_len).prop_map(|v| v.into_iter().map(var).collect())
}

pub fn atom_strategy(vars: usize, max_len: usize) -> impl Strategy<Value = Atom> {
    let t = move || tuple_strategy(vars, max_len);
    prop_oneof![
        (t(), t(), t()).prop_map(|(c, l, r)| Atom::independence(c, l, r)),
        (1..=max_len.max(1))
            .prop_flat_map(move |n| {
                (
                    prop::collection::vec(0..vars, n),
                    prop::collection::vec(0..vars, n),
                )
            })
            .prop_map(|(l, r)| Atom::inclusion(
                l.into_iter().map(var).collect(),
                r.into_iter().map(var).collect()
            )
            .unwrap()),
        (t(), 0..vars).prop_map(|(d, y)| Atom::dependence(d, var(y))),
    ]
}

pub fn team_strategy(
    vars: usize,
    max_rows: usize,
    values: u32,
) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..values, vars), 0..=max_rows)
}

pub fn make_team(vars: usize, rows: &[Vec<u32>]) -> Team {
    Team::new(
        (0..vars).map(var).collect(),
        rows.iter()
            .map(|r| r.iter().map(|&x| Value(x)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn random_tuple(rng: &mut impl Rng, vars: usize, min: usize, max: usize) -> Vec<Variable> {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| var(rng.gen_range(0..vars))).collect()
}

pub fn random_atom(rng: &mut impl Rng, vars: usize, max_len: usize) -> Atom {
    match rng.gen_range(0..3) {
        0 => Atom::independence(
            random_tuple(rng, vars, 0, max_len),
            random_tuple(rng, vars, 0, max_len),
            random_tuple(rng, vars, 0, max_len),
        ),
        1 => {
            let n = rng.gen_range(1..=max_len);
            Atom::inclusion(
                random_tuple(rng, vars, n, n),
                random_tuple(rng, vars, n, n),
            )
            .unwrap()
        }
        _ => Atom::dependence(
            random_tuple(rng, vars, 0, max_len),
            var(rng.gen_range(0..vars)),
        ),
    }
}

pub fn random_problem(rng: &mut impl Rng, vars: usize, max_atoms: usize, max_len: usize) -> Problem {
    let k = rng.gen_range(0..=max_atoms);
    Problem::new(
        (0..k).map(|_| random_atom(rng, vars, max_len)).collect(),
        random_atom(rng, vars, max_len),
    )
}

/// Satisfaction by literal quantification over rows, written independently of
/// the library evaluator.
pub fn oracle_satisfies(domain: &[Variable], rows: &[Vec<u32>], atom: &Atom) -> bool {
    let col = |v: &Variable| domain.iter().position(|x| x == v).unwrap();
    let proj = |row: &Vec<u32>, t: &[Variable]| -> Vec<u32> { t.iter().map(|v| row[col(v)]).collect() };
    match atom {
        Atom::Dependence { det, dep } => {
            for s in rows {
                for t in rows {
                    if proj(s, det) == proj(t, det) && s[col(dep)] != t[col(dep)] {
                        return false;
                    }
                }
            }
            true
        }
        Atom::Inclusion { lhs, rhs } => rows
            .iter()
            .all(|s| rows.iter().any(|t| proj(s, lhs) == proj(t, rhs))),
        Atom::Independence { cond, left, right } => {
            for s in rows {
                for t in rows {
                    if proj(s, cond) != proj(t, cond) {
                        continue;
                    }
                    let mut found = false;
                    for u in rows {
                        if proj(u, cond) == proj(s, cond)
                            && proj(u, left) == proj(s, left)
                            && proj(u, right) == proj(t, right)
                        {
                            found = true;
                        }
                    }
                    if !found {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Labeled-path reachability between cells, following edges in both
/// orientations, with the trivial path for identical cells.
pub fn oracle_connected(g: &ChaseGraph, u: VertexId, a: usize, w: VertexId, b: usize) -> bool {
    oracle_connected_below(g, u, a, w, b, u32::MAX)
}

pub fn oracle_connected_below(
    g: &ChaseGraph,
    u: VertexId,
    a: usize,
    w: VertexId,
    b: usize,
    max_level: u32,
) -> bool {
    let mut adjacent: std::collections::HashMap<(VertexId, usize), Vec<(VertexId, usize)>> =
        Default::default();
    for e in g.edges().iter().filter(|e| e.level <= max_level) {
        adjacent.entry((e.u, e.a)).or_default().push((e.w, e.b));
        adjacent.entry((e.w, e.b)).or_default().push((e.u, e.a));
    }
    let start = (u, a);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(cell) = queue.pop_front() {
        if cell == (w, b) {
            return true;
        }
        for &next in adjacent.get(&cell).into_iter().flatten() {
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Labels every cell `(vertex, variable)` by its path component, using only
/// edges at or below `max_level`.
pub fn oracle_components(g: &ChaseGraph, max_level: u32) -> Vec<Vec<usize>> {
    let n = g.variables().len();
    let mut adjacent = vec![Vec::new(); g.vertices().len() * n];
    for e in g.edges().iter().filter(|e| e.level <= max_level) {
        let (x, y) = (e.u.index() * n + e.a, e.w.index() * n + e.b);
        adjacent[x].push(y);
        adjacent[y].push(x);
    }
    let mut label = vec![usize::MAX; adjacent.len()];
    for start in 0..adjacent.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adjacent[x] {
                if label[y] == usize::MAX {
                    label[y] = start;
                    queue.push_back(y);
                }
            }
        }
    }
    label.chunks(n.max(1)).map(<[usize]>::to_vec).collect()
}

/// A problem with a core-normal goal whose chase query is ready to build.
pub fn random_chase_graph(rng: &mut impl Rng, vars: usize, max_atoms: usize, max_len: usize) -> (Problem, ChaseGraph) {
    loop {
        let p = random_problem(rng, vars, max_atoms, max_len);
        let n = p.normalize();
        let q = n.query(0);
        if let Ok(g) = ChaseGraph::for_query(q) {
            return (p, g);
        }
    }
}
