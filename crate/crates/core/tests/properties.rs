mod common;

use common::*;
use gbqpe::groebner::{buchberger, GroebnerBasis, GroebnerLimits, Ideal};
use gbqpe::polyring::{Monomial, MonomialOrder, Polynomial, Rational, Ring};
use gbqpe::quotient::MultMatrixSet;
use proptest::prelude::*;

fn ring3() -> Ring {
    Ring::new(["x", "y", "e"]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| *r != Rational::from_integer(0.into()))
}

/// Random polynomial in (x, y, e) with up to `terms` terms of degree at most `deg` per variable.
fn poly(terms: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=deg, 3), rational()), 1..=terms).prop_map(|ts| {
        Polynomial::from_terms(&ring3(), ts.into_iter().map(|(e, c)| (Monomial::new(e), c)))
    })
}

fn small_ideal() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(poly(3, 2), 2..=3).prop_filter("nonzero generators", |g| g.iter().all(|p| !p.is_zero()))
}

fn limits() -> GroebnerLimits {
    GroebnerLimits {
        max_pair_reductions: 5_000,
        max_degree: 14,
    }
}

fn try_basis(gens: &[Polynomial], order: MonomialOrder) -> Option<GroebnerBasis> {
    buchberger(&Ideal::new(gens.to_vec(), order).ok()?, limits()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn emitted_basis_passes_buchberger_criterion(gens in small_ideal()) {
        let Some(gb) = try_basis(&gens, MonomialOrder::degrevlex(3)) else { return Ok(()); };
        prop_assert!(gb.is_groebner());
        prop_assert!(gb.check_reduced());
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
    }

    #[test]
    fn reduced_basis_ignores_generator_order(gens in small_ideal(), rot in 1usize..3) {
        let Some(a) = try_basis(&gens, MonomialOrder::degrevlex(3)) else { return Ok(()); };
        let mut shuffled = gens.clone();
        shuffled.rotate_left(rot % gens.len());
        shuffled.reverse();
        let b = try_basis(&shuffled, MonomialOrder::degrevlex(3)).expect("same ideal");
        prop_assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(p in poly(5, 3), q in poly(5, 3), a in rational(), b in rational()) {
        for gb in [toy_gb(), heh_gb()] {
            let np = gb.normal_form(&p);
            prop_assert_eq!(gb.normal_form(&np), np.clone());
            let nq = gb.normal_form(&q);
            let combo = &p.scale(&a) + &q.scale(&b);
            let want = &np.scale(&a) + &nq.scale(&b);
            prop_assert_eq!(gb.normal_form(&combo), want);
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn multiplication_matrices_represent_products(p in poly(4, 3), scale in nonzero_rational()) {
        for gb in [toy_gb(), heh_gb()] {
            let set = MultMatrixSet::new(&gb).unwrap();
            let basis = set.basis();
            let p = p.scale(&scale);
            let coords = basis.coordinates(&gb.normal_form(&p));
            for (i, var) in set.variables().iter().enumerate() {
                let v = Polynomial::var(basis.ring(), var).unwrap();
                let lhs = basis.coordinates(&gb.normal_form(&(&p * &v)));
                prop_assert_eq!(lhs, set.matrices()[i].mul_vec(&coords));
            }
        }
    }
}
