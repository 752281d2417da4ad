//! Buchberger's algorithm over `Q` with full reduction.
//!
//! Pairs are processed under the normal strategy (smallest lcm degree first)
//! and pairs with coprime leading monomials are skipped. The result is always
//! minimized, inter-reduced and monic, so it is unique for the ideal and the
//! order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::polyring::{Monomial, MonomialOrder, PolyError, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
    #[error("generator {0} is the zero polynomial")]
    ZeroGenerator(usize),
    #[error("monomial order has {order} variables but the ring has {ring}")]
    OrderArity { order: usize, ring: usize },
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: u64 },
}

#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        let first = generators.first().ok_or(GroebnerError::EmptyIdeal)?;
        let ring = first.ring().clone();
        if order.nvars() != ring.len() {
            return Err(GroebnerError::OrderArity {
                order: order.nvars(),
                ring: ring.len(),
            });
        }
        for (i, g) in generators.iter().enumerate() {
            if g.ring() != &ring {
                return Err(PolyError::RingMismatch.into());
            }
            if g.is_zero() {
                return Err(GroebnerError::ZeroGenerator(i));
            }
        }
        Ok(Ideal {
            ring,
            order,
            generators,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Same generators under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ideal, GroebnerError> {
        Ideal::new(self.generators.clone(), order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerLimits {
    pub max_pair_reductions: u64,
    pub max_degree: u32,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_pair_reductions: 1_000_000,
            max_degree: 60,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    /// Wraps polynomials already known to form a reduced basis, e.g. read
    /// back from disk. Elements are re-sorted and made monic; use
    /// [`Self::is_groebner`] to verify.
    pub fn from_reduced(elements: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        let ideal = Ideal::new(elements, order)?;
        let mut elements: Vec<Polynomial> = ideal
            .generators
            .iter()
            .map(|g| g.monic(&ideal.order))
            .collect();
        sort_by_leading(&mut elements, &ideal.order);
        Ok(GroebnerBasis {
            ring: ideal.ring,
            order: ideal.order,
            elements,
            reduced: true,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_monomial(&self.order).expect("nonzero").clone())
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.elements, &self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Checks that every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let n = self.elements.len();
        for i in 0..n {
            for j in i + 1..n {
                let s = s_polynomial(&self.elements[i], &self.elements[j], &self.order)
                    .expect("nonzero elements");
                if !self.normal_form(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Monic elements, no term divisible by another element's leading term.
    pub fn check_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.elements.iter().enumerate().all(|(i, g)| {
            g.leading_term(&self.order).map(|(_, c)| c.is_one()).unwrap_or(false)
                && g.terms().all(|(m, _)| {
                    lms.iter()
                        .enumerate()
                        .all(|(j, lm)| j == i || !lm.divides(m))
                })
        })
    }
}

/// `(lcm/LT(f)) f - (lcm/LT(g)) g`, where the leading coefficients are
/// divided out so the leading terms cancel exactly.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &MonomialOrder) -> Result<Polynomial, GroebnerError> {
    if f.ring() != g.ring() {
        return Err(PolyError::RingMismatch.into());
    }
    let (mf, cf) = f.leading_term(ord)?;
    let (mg, cg) = g.leading_term(ord)?;
    let l = mf.lcm(mg);
    let uf = mf.quotient_of(&l).expect("lcm is a multiple");
    let ug = mg.quotient_of(&l).expect("lcm is a multiple");
    let a = f.mul_term(&uf, &cf.recip());
    let b = g.mul_term(&ug, &cg.recip());
    Ok(a.try_sub(&b)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Multivariate division: `p = sum q_i f_i + r` where no term of `r` is
/// divisible by any `LT(f_i)`. The first divisor in `basis` order wins.
pub fn reduce(p: &Polynomial, basis: &[Polynomial], ord: &MonomialOrder) -> Result<Division, GroebnerError> {
    let mut quotients = Vec::with_capacity(basis.len());
    for (i, f) in basis.iter().enumerate() {
        if f.is_zero() {
            return Err(GroebnerError::ZeroGenerator(i));
        }
        if f.ring() != p.ring() {
            return Err(PolyError::RingMismatch.into());
        }
        quotients.push(BTreeMap::new());
    }
    let divisors: Vec<Divisor> = basis.iter().map(|f| Divisor::new(f, ord)).collect();
    let remainder = divide(p, &divisors, ord, |i, m, c| {
        *quotients[i].entry(m).or_insert_with(Rational::zero) += c;
    });
    let ring = p.ring();
    Ok(Division {
        quotients: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(ring, q))
            .collect(),
        remainder,
    })
}

/// Remainder of [`reduce`] without tracking quotients.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], ord: &MonomialOrder) -> Polynomial {
    let divisors: Vec<Divisor> = basis
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| Divisor::new(f, ord))
        .collect();
    divide(p, &divisors, ord, |_, _, _| {})
}

struct Divisor {
    lm: Monomial,
    inv_lc: Rational,
    /// terms other than the leading one
    tail: Vec<(Monomial, Rational)>,
}

impl Divisor {
    fn new(f: &Polynomial, ord: &MonomialOrder) -> Self {
        let (lm, lc) = f.leading_term(ord).expect("nonzero divisor");
        let lm = lm.clone();
        let tail = f
            .terms()
            .filter(|(m, _)| **m != lm)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Divisor {
            inv_lc: lc.recip(),
            lm,
            tail,
        }
    }
}

/// Working polynomial keyed so the last entry is the leading term.
struct Work {
    terms: BTreeMap<Vec<i64>, (Monomial, Rational)>,
}

impl Work {
    fn add(&mut self, ord: &MonomialOrder, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(ord.sort_key(&m)) {
            Entry::Vacant(v) => {
                v.insert((m, c));
            }
            Entry::Occupied(mut o) => {
                o.get_mut().1 += c;
                if o.get().1.is_zero() {
                    o.remove();
                }
            }
        }
    }
}

fn divide<F>(p: &Polynomial, divisors: &[Divisor], ord: &MonomialOrder, mut record: F) -> Polynomial
where
    F: FnMut(usize, Monomial, Rational),
{
    let mut work = Work {
        terms: BTreeMap::new(),
    };
    for (m, c) in p.terms() {
        work.terms.insert(ord.sort_key(m), (m.clone(), c.clone()));
    }
    let mut rem = BTreeMap::new();
    while let Some((_, (m, c))) = work.terms.pop_last() {
        match divisors
            .iter()
            .enumerate()
            .find_map(|(i, d)| d.lm.quotient_of(&m).map(|u| (i, d, u)))
        {
            Some((i, d, u)) => {
                let q = &c * &d.inv_lc;
                for (tm, tc) in &d.tail {
                    work.add(ord, tm.mul(&u), -(&q * tc));
                }
                record(i, u, q);
            }
            None => {
                rem.insert(m, c);
            }
        }
    }
    Polynomial::from_map(p.ring(), rem)
}

fn sort_by_leading(elements: &mut [Polynomial], ord: &MonomialOrder) {
    elements.sort_by(|a, b| a.cmp_leading(b, ord));
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Computes the reduced Groebner basis of `ideal`.
pub fn buchberger(ideal: &Ideal, limits: GroebnerLimits) -> Result<GroebnerBasis, GroebnerError> {
    let ord = &ideal.order;
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut reductions: u64 = 0;

    let push = |p: Polynomial, basis: &mut Vec<Polynomial>, lms: &mut Vec<Monomial>, pairs: &mut Vec<Pair>| {
        let lm = p.leading_monomial(ord).expect("nonzero").clone();
        let j = basis.len();
        for (i, other) in lms.iter().enumerate() {
            // first criterion: coprime leading monomials reduce to zero
            if other.is_coprime(&lm) {
                continue;
            }
            pairs.push(Pair {
                i,
                j,
                lcm: other.lcm(&lm),
            });
        }
        basis.push(p);
        lms.push(lm);
    };

    for g in &ideal.generators {
        let r = normal_form(g, &basis, ord);
        if !r.is_zero() {
            check_degree(&r, limits)?;
            push(r.monic(ord), &mut basis, &mut lms, &mut pairs);
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first (degree, then the order itself)
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.lcm
                    .degree()
                    .cmp(&b.lcm.degree())
                    .then_with(|| ord.cmp(&a.lcm, &b.lcm))
                    .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(k);
        reductions += 1;
        if reductions > limits.max_pair_reductions {
            return Err(GroebnerError::ResourceLimit {
                what: "pair reductions",
                limit: limits.max_pair_reductions,
            });
        }
        let s = s_polynomial(&basis[pair.i], &basis[pair.j], ord)?;
        let r = normal_form(&s, &basis, ord);
        if !r.is_zero() {
            check_degree(&r, limits)?;
            push(r.monic(ord), &mut basis, &mut lms, &mut pairs);
        }
    }

    Ok(GroebnerBasis {
        ring: ideal.ring.clone(),
        order: ord.clone(),
        elements: reduce_basis(basis, ord),
        reduced: true,
    })
}

fn check_degree(p: &Polynomial, limits: GroebnerLimits) -> Result<(), GroebnerError> {
    if p.total_degree().unwrap_or(0) > limits.max_degree {
        return Err(GroebnerError::ResourceLimit {
            what: "total degree",
            limit: limits.max_degree as u64,
        });
    }
    Ok(())
}

/// Minimizes and inter-reduces a Groebner basis, making it monic.
fn reduce_basis(basis: Vec<Polynomial>, ord: &MonomialOrder) -> Vec<Polynomial> {
    let mut minimal: Vec<Polynomial> = Vec::new();
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial(ord).expect("nonzero").clone())
        .collect();
    for (i, g) in basis.iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(j, lm)| {
            j != i && lm.divides(&lms[i]) && (lm != &lms[i] || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        out.push(normal_form(&minimal[i], &others, ord).monic(ord));
    }
    sort_by_leading(&mut out, ord);
    out
}
