mod common;

use common::*;
use incind_core::atoms::{is_identity_variant, normalize_atom, Atom};
use incind_core::team::{satisfies_atom, satisfies_set, Team, Value};
use proptest::prelude::*;

fn sat(vars: usize, rows: &[Vec<u32>], atom: &Atom) -> bool {
    satisfies_atom(&make_team(vars, rows), atom).unwrap()
}

#[test]
fn evaluator_matches_quantifier_oracle_on_all_small_teams() {
    // Every team with at most 3 rows over 3 variables and 3 values, against a
    // fixed battery of atoms covering each kind and tuple shape.
    let domain: Vec<_> = (0..3).map(var).collect();
    let all_rows: Vec<Vec<u32>> = (0..27u32)
        .map(|k| vec![k % 3, (k / 3) % 3, k / 9])
        .collect();
    let mut teams: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for a in 0..27 {
        teams.push(vec![all_rows[a].clone()]);
        for b in a + 1..27 {
            teams.push(vec![all_rows[a].clone(), all_rows[b].clone()]);
            for c in b + 1..27 {
                teams.push(vec![
                    all_rows[a].clone(),
                    all_rows[b].clone(),
                    all_rows[c].clone(),
                ]);
            }
        }
    }
    let v = |names: &[usize]| names.iter().map(|&i| var(i)).collect::<Vec<_>>();
    let atoms = [
        Atom::independence(v(&[]), v(&[0]), v(&[1])),
        Atom::independence(v(&[0]), v(&[1]), v(&[2])),
        Atom::independence(v(&[0]), v(&[1, 0]), v(&[2, 1])),
        Atom::independence(v(&[]), v(&[0, 1]), v(&[2])),
        Atom::independence(v(&[2]), v(&[]), v(&[0])),
        Atom::inclusion(v(&[0]), v(&[1])).unwrap(),
        Atom::inclusion(v(&[0, 1]), v(&[1, 2])).unwrap(),
        Atom::inclusion(v(&[0, 0]), v(&[1, 2])).unwrap(),
        Atom::dependence(v(&[0]), var(1)),
        Atom::dependence(v(&[]), var(2)),
        Atom::dependence(v(&[0, 1]), var(2)),
    ];
    for rows in &teams {
        for atom in &atoms {
            assert_eq!(
                sat(3, rows, atom),
                oracle_satisfies(&domain, rows, atom),
                "{atom} on {rows:?}"
            );
        }
    }
}

#[test]
fn empty_team_satisfies_everything() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    use rand::SeedableRng;
    for _ in 0..500 {
        let atom = random_atom(&mut rng, 4, 3);
        assert!(sat(4, &[], &atom), "{atom}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn evaluator_matches_oracle(atom in atom_strategy(4, 3), rows in team_strategy(4, 8, 3)) {
        let domain: Vec<_> = (0..4).map(var).collect();
        prop_assert_eq!(sat(4, &rows, &atom), oracle_satisfies(&domain, &rows, &atom));
    }

    #[test]
    fn satisfaction_is_local(atom in atom_strategy(4, 3), rows in team_strategy(4, 8, 3)) {
        let team = make_team(4, &rows);
        let restricted = team.restrict(&atom.variables()).unwrap();
        prop_assert_eq!(
            satisfies_atom(&team, &atom).unwrap(),
            satisfies_atom(&restricted, &atom).unwrap()
        );
    }

    #[test]
    fn injective_value_renaming_preserves_satisfaction(
        atom in atom_strategy(4, 3),
        rows in team_strategy(4, 8, 3),
        shift in 1u32..50,
    ) {
        let team = make_team(4, &rows);
        let renamed = team.map_values(|Value(x)| Value(x * 7 + shift));
        prop_assert_eq!(
            satisfies_atom(&team, &atom).unwrap(),
            satisfies_atom(&renamed, &atom).unwrap()
        );
    }

    #[test]
    fn duplicate_rows_change_nothing(
        atom in atom_strategy(4, 3),
        rows in team_strategy(4, 8, 3).prop_filter("non-empty", |r| !r.is_empty()),
        pick in any::<prop::sample::Index>(),
    ) {
        let mut doubled = rows.clone();
        doubled.push(rows[pick.index(rows.len())].clone());
        prop_assert_eq!(sat(4, &rows, &atom), sat(4, &doubled, &atom));
    }

    #[test]
    fn normalization_is_idempotent(atom in atom_strategy(4, 3)) {
        let once = normalize_atom(&atom);
        let twice: Vec<Atom> = once.iter().flat_map(normalize_atom).collect();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn normalization_preserves_meaning(
        atom in atom_strategy(4, 3),
        rows in team_strategy(4, 20, 3),
    ) {
        let team = make_team(4, &rows);
        let parts = normalize_atom(&atom);
        prop_assert_eq!(
            satisfies_atom(&team, &atom).unwrap(),
            satisfies_set(&team, &parts).unwrap()
        );
    }

    #[test]
    fn normalized_atoms_have_disjoint_parts(atom in atom_strategy(4, 3)) {
        for n in normalize_atom(&atom) {
            if let Atom::Independence { cond, left, right } = n.to_core() {
                let overlap = |x: &[_], y: &[_]| x.iter().any(|v| y.contains(v));
                let dependence_form = left.len() == 1 && left == right;
                prop_assert!(!overlap(&cond, &left) && !overlap(&cond, &right));
                prop_assert!(dependence_form || !overlap(&left, &right));
            }
        }
    }

    #[test]
    fn identity_variant_with_nothing_replaced(atom in atom_strategy(4, 3), a in 0usize..4, b in 0usize..4) {
        prop_assert!(is_identity_variant(&atom, &atom, &var(a), &var(b)));
    }

    #[test]
    fn identity_variant_onto_itself_is_equality(
        x in atom_strategy(3, 2),
        y in atom_strategy(3, 2),
        a in 0usize..3,
    ) {
        prop_assert_eq!(is_identity_variant(&x, &y, &var(a), &var(a)), x == y);
    }
}

#[test]
fn team_construction_checks_widths() {
    assert!(Team::new(vec![var(0)], vec![vec![Value(0), Value(1)]]).is_err());
}

proptest! {
    #[test]
    fn canonical_form_is_a_fixed_point(rows in team_strategy(3, 8, 5)) {
        let c = make_team(3, &rows).canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        let domain: Vec<_> = (0..3).map(var).collect();
        let flat: Vec<Vec<u32>> = rows.clone();
        let back: Vec<Vec<u32>> = c.rows().iter().map(|r| r.iter().map(|v| v.0).collect()).collect();
        prop_assert_eq!(back.len(), make_team(3, &flat).len());
        for atom in [
            Atom::independence(vec![var(0)], vec![var(1)], vec![var(2)]),
            Atom::inclusion(vec![var(0), var(1)], vec![var(1), var(2)]).unwrap(),
        ] {
            prop_assert_eq!(oracle_satisfies(&domain, &flat, &atom), oracle_satisfies(&domain, &back, &atom));
        }
    }
}
