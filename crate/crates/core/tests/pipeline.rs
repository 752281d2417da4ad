mod common;

use common::*;
use gbqpe::groebner::{buchberger, GroebnerLimits};
use gbqpe::hf_builder::*;
use gbqpe::linalg::c;
use gbqpe::polyring::{parse, Monomial, Rational};
use gbqpe::quotient::{standard_monomials, MultMatrixSet};
use gbqpe::rootfind::{solve_system, RootClass, RootSet, SolveOptions};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn solve_qubo(model: &QuboModel) -> RootSet {
    let gb = buchberger(&build_qubo_ideal(model).unwrap(), GroebnerLimits::default()).unwrap();
    solve_system(&MultMatrixSet::new(&gb).unwrap(), &SolveOptions::default()).unwrap()
}

/// Roots as exact integer tuples, after checking they sit on integers.
fn integer_roots(rs: &RootSet) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = rs
        .roots
        .iter()
        .map(|r| {
            assert_eq!(r.class, RootClass::Real);
            r.values
                .iter()
                .map(|z| {
                    let k = z.re.round();
                    assert!((z - c(k, 0.0)).norm() < 1e-8, "{z}");
                    k as i64
                })
                .collect()
        })
        .collect();
    out.sort();
    out
}

fn brute_force(model: &QuboModel) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = model
        .enumerate()
        .into_iter()
        .map(|(bits, e)| {
            assert!(e.is_integer());
            let mut row: Vec<i64> = bits.iter().map(|&b| b as i64).collect();
            row.push(e.to_integer().try_into().unwrap());
            row
        })
        .collect();
    out.sort();
    out
}

#[test]
fn qubo_single_variable_roots() {
    let m = QuboModel::from_linear_quadratic(&[q(3, 1)], &[]).unwrap();
    assert_eq!(integer_roots(&solve_qubo(&m)), vec![vec![0, 0], vec![1, 3]]);
}

#[test]
fn qubo_pair_energies() {
    let m = QuboModel::from_linear_quadratic(&[q(1, 1), q(1, 1)], &[((0, 1), q(2, 1))]).unwrap();
    let roots = integer_roots(&solve_qubo(&m));
    let mut energies: Vec<i64> = roots.iter().map(|r| r[2]).collect();
    energies.sort();
    assert_eq!(energies, vec![0, 1, 1, 4]);
}

#[test]
fn qubo_zero_model_has_zero_energy_everywhere() {
    let m = QuboModel::new(2);
    let roots = integer_roots(&solve_qubo(&m));
    assert_eq!(roots.len(), 4);
    assert!(roots.iter().all(|r| r[2] == 0));
}

#[test]
fn qubo_json_round_trip() {
    let mut m = QuboModel::new(3);
    m.add_term(&[0, 2], q(-2, 1)).unwrap();
    m.add_term(&[1], q(5, 1)).unwrap();
    m.add_term(&[0, 1, 2], q(1, 2)).unwrap();
    assert_eq!(QuboModel::from_json(&m.to_json()).unwrap(), m);
    assert!(QuboModel::from_json("{").is_err());
}

fn qubo_model() -> impl Strategy<Value = QuboModel> {
    (1usize..=3).prop_flat_map(|n| {
        let subsets: Vec<Vec<usize>> = (1..1usize << n)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        let k = subsets.len();
        prop::collection::vec(-4i64..=4, k).prop_map(move |coefs| {
            let mut m = QuboModel::new(n);
            for (s, c) in subsets.iter().zip(coefs) {
                m.add_term(s, Rational::from_integer(c.into())).unwrap();
            }
            m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn qubo_roots_equal_binary_enumeration(model in qubo_model()) {
        let rs = solve_qubo(&model);
        prop_assert!(rs.residuals_ok());
        prop_assert_eq!(integer_roots(&rs), brute_force(&model));
    }
}

#[test]
fn toy_pipeline_reproduces_expectation_rows() {
    let set = toy_set();
    let rs = solve_system(&set, &SolveOptions::default()).unwrap();
    let s = SQRT_HALF;
    // (x, y, e) of the four rows
    let rows = [[s, s, -1.0], [-s, -s, -1.0], [-s, s, 1.0], [s, -s, 1.0]];
    for row in rows {
        assert!(rs
            .roots
            .iter()
            .any(|r| r.values.iter().zip(row).all(|(z, w)| (z - c(w, 0.0)).norm() < 1e-10)));
    }
}

#[test]
fn toy_with_potential_still_solves() {
    let ring = gbqpe::polyring::Ring::new(["x", "y"]).unwrap();
    let spec = ToyModelSpec {
        potential: parse("x^2", &ring).unwrap(),
    };
    let ideal = build_toy_ideal(&spec).unwrap();
    let gb = buchberger(&ideal, GroebnerLimits::default()).unwrap();
    let rs = solve_system(&MultMatrixSet::new(&gb).unwrap(), &SolveOptions::default()).unwrap();
    assert!(rs.residuals_ok());
    for r in &rs.roots {
        let res = gbqpe::rootfind::relative_residuals(ideal.generators(), &r.values);
        assert!(res.iter().all(|&x| x < 1e-8), "{res:?}");
    }
}

#[test]
fn quadratic_objective_has_its_root_at_the_origin() {
    let ring = objective_ring();
    let spec = ObjectiveSpec {
        objective: parse("x^2 + y^2 + e^2", &ring).unwrap(),
        r_constraint: parse("100*R - 146", &ring).unwrap(),
        fixed_r: None,
    };
    let gb = buchberger(&build_hf_ideal(&spec).unwrap(), GroebnerLimits::default()).unwrap();
    let rs = solve_system(&MultMatrixSet::new(&gb).unwrap(), &SolveOptions::default()).unwrap();
    assert_eq!(rs.len(), 1);
    for (name, z) in rs.variables.iter().zip(&rs.roots[0].values) {
        let want = if name == "R" { 1.46 } else { 0.0 };
        assert!((z - c(want, 0.0)).norm() < 1e-12, "{name} {z}");
    }
}

#[test]
fn heh_quotient_basis() {
    let basis = standard_monomials(&heh_gb()).unwrap();
    let mut labels = basis.labels();
    labels.sort();
    let mut want: Vec<String> = ["y^2", "x*e", "y*e", "e^2", "x", "y", "e", "1"].map(String::from).to_vec();
    want.sort();
    assert_eq!(labels, want);
    assert_eq!(basis.monomials()[basis.len() - 1], Monomial::one(3));
}

#[test]
fn heh_ground_state_is_near_the_scf_reference() {
    let rs = solve_system(&heh_set(), &SolveOptions::default()).unwrap();
    let reference = [0.801918, 0.336800, -1.597448];
    let hit = rs
        .real_roots()
        .any(|r| r.real_values().iter().zip(reference).all(|(a, b)| (a - b).abs() <= 0.01));
    assert!(hit);
}
