use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{format_rational, to_f64, Monomial, MonomialOrder, OrderKind, PolyError, Rational, Ring};

/// A polynomial in `Q[ring]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::monomial(ring, Monomial::one(ring.len()), c)
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), ring.len(), "monomial arity does not match ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self, PolyError> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::monomial(ring, Monomial::var(i, ring.len()), Rational::one()))
    }

    /// Builds a polynomial from possibly repeated or zero terms.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in storage order (not a monomial order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponents()[i])
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to `var`.
    pub fn differentiate(&self, var: &str) -> Result<Polynomial, PolyError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[i] -= 1;
            out.add_term(Monomial::new(ex), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Leading monomial and coefficient under `ord`.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(&Monomial, &Rational), PolyError> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<&Monomial> {
        self.leading_term(ord).ok().map(|(m, _)| m)
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, ord: &MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            Ok((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            Err(_) => self.clone(),
        }
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.ring.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = Complex64::new(to_f64(c), 0.0);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    if e > 0 {
                        t *= x.powu(e);
                    }
                }
                t
            })
            .sum()
    }

    /// Euclidean norm of the coefficient vector, in floating point.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| to_f64(c).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_coefficient(&self) -> Option<Rational> {
        self.terms.values().map(|c| c.abs()).max()
    }

    /// Substitutes `var = value` and drops `var` from the ring.
    pub fn substitute(&self, var: &str, value: &Rational) -> Result<Polynomial, PolyError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let ring = self.ring.without(var)?;
        let mut out = Polynomial::zero(&ring);
        for (m, c) in &self.terms {
            let mut ex = m.exponents().to_vec();
            let e = ex.remove(i);
            let factor = num_traits::pow(value.clone(), e as usize);
            out.add_term(Monomial::new(ex), c * factor);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in another ring containing all variables
    /// that actually occur.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial, PolyError> {
        let mut map = Vec::with_capacity(self.ring.len());
        for (i, name) in self.ring.vars().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if self.degree_in(i) == 0 => map.push(None),
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut ex = vec![0; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if let Some(j) = map[i] {
                    ex[j] = e;
                }
            }
            out.add_term(Monomial::new(ex), c.clone());
        }
        Ok(out)
    }

    /// Formats terms in descending `ord` order, e.g. `2*x^2*y - 1/2*e + 3`.
    /// The output re-parses to the same polynomial.
    pub fn to_string_with(&self, ord: &MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = self.ring.vars();
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms(ord).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    s.push_str(&format_rational(&abs));
                    s.push('*');
                }
                s.push_str(&m.display(names).to_string());
            }
        }
        s
    }

    /// Monomials that occur, sorted descending under `ord`.
    pub fn support(&self, ord: &MonomialOrder) -> Vec<Monomial> {
        self.sorted_terms(ord)
            .into_iter()
            .map(|(m, _)| m.clone())
            .collect()
    }

    pub(crate) fn from_map(ring: &Ring, terms: BTreeMap<Monomial, Rational>) -> Polynomial {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Compares leading monomials; zero sorts below everything.
    pub fn cmp_leading(&self, other: &Polynomial, ord: &MonomialOrder) -> Ordering {
        match (self.leading_monomial(ord), other.leading_monomial(ord)) {
            (Some(a), Some(b)) => ord.cmp(a, b),
            (None, None) => Ordering::Equal,
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ord = MonomialOrder::declared(OrderKind::Degrevlex, self.ring.len());
        f.write_str(&self.to_string_with(&ord))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.ring)
    }
}

// Operator sugar; panics when the rings differ. Use `try_*` to get an error.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use proptest::prelude::*;

    fn ring3() -> Ring {
        Ring::new(["x", "y", "e"]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse(s, &ring3()).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        let a = p("3*x*y - 2/7*e^3 + 1");
        assert!((&a + &(-&a)).is_zero());
        assert_eq!(&p("x + y*e") * &p("x - y*e"), p("x^2 - y^2*e^2"));
        assert_eq!(p("x + y").pow(3), p("x^3 + 3*x^2*y + 3*x*y^2 + y^3"));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let other = Ring::new(["x", "y"]).unwrap();
        let q = parse("x", &other).unwrap();
        assert_eq!(p("x").try_add(&q), Err(PolyError::RingMismatch));
        assert_eq!(p("x").try_mul(&q), Err(PolyError::RingMismatch));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^2 + y^2 - 1").differentiate("x").unwrap(), p("2*x"));
        // d/dy of x*V - y - e*x with V = 0
        assert_eq!(p("-y - e*x").differentiate("y").unwrap(), p("-1"));
        assert!(p("x").differentiate("q").is_err());
    }

    #[test]
    fn leading_terms() {
        let lex = MonomialOrder::lex(3);
        let drl = MonomialOrder::degrevlex(3);
        let f = p("x + y*e");
        let (m, c) = f.leading_term(&lex).unwrap();
        assert_eq!((m.clone(), c.clone()), (Monomial::new(vec![1, 0, 0]), Rational::one()));
        let (m, _) = f.leading_term(&drl).unwrap();
        assert_eq!(m, &Monomial::new(vec![0, 1, 1]));
        let g = p("2*y^2 - 1");
        for ord in [&lex, &drl] {
            let (m, c) = g.leading_term(ord).unwrap();
            assert_eq!(m, &Monomial::new(vec![0, 2, 0]));
            assert_eq!(c, &Rational::from_integer(2.into()));
        }
        assert_eq!(
            Polynomial::zero(&ring3()).leading_term(&lex),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn substitution_and_embedding() {
        let ring = Ring::new(["R", "x"]).unwrap();
        let f = parse("100*R - 146 + R^2*x", &ring).unwrap();
        let r = Rational::new(73.into(), 50.into());
        let g = f.substitute("R", &r).unwrap();
        assert_eq!(g.ring().vars(), &["x".to_string()]);
        assert_eq!(g, parse("5329/2500*x", g.ring()).unwrap());
        let h = parse("x*y", &Ring::new(["x", "y"]).unwrap()).unwrap();
        assert_eq!(h.embed(&ring3()).unwrap(), p("x*y"));
        assert!(p("e").embed(&Ring::new(["x", "y"]).unwrap()).is_err());
    }

    #[test]
    fn evaluation() {
        let f = p("x^2 + 2*y*e - 1/2");
        let pt = [Rational::one(), Rational::from_integer(2.into()), Rational::new(1.into(), 4.into())];
        assert_eq!(f.eval_rational(&pt), Rational::new(3.into(), 2.into()));
        let z = f.eval_complex(&[Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)]);
        assert!((z - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    // ---- property tests -------------------------------------------------

    fn arb_poly(ring: Ring) -> impl Strategy<Value = Polynomial> {
        let n = ring.len();
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..4, n),
                -20i64..20,
                1i64..6,
            ),
            0..7,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                &ring,
                terms.into_iter().map(|(e, a, b)| {
                    (Monomial::new(e), Rational::new(a.into(), b.into()))
                }),
            )
        })
    }

    fn ring4() -> Ring {
        Ring::new(["a", "b", "c", "d"]).unwrap()
    }

    /// Schoolbook product accumulated into a plain vector of terms.
    fn slow_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut acc: Vec<(Monomial, Rational)> = Vec::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let m = Monomial::new(
                    ma.exponents()
                        .iter()
                        .zip(mb.exponents())
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                match acc.iter_mut().find(|(mm, _)| *mm == m) {
                    Some(slot) => slot.1 += ca * cb,
                    None => acc.push((m, ca * cb)),
                }
            }
        }
        Polynomial::from_terms(a.ring(), acc)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(ring4()), b in arb_poly(ring4()), c in arb_poly(ring4())) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, slow_mul(&a, &b));
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!(
                    (&a * &b).total_degree().unwrap(),
                    a.total_degree().unwrap() + b.total_degree().unwrap()
                );
            }
        }

        #[test]
        fn leibniz_rule(a in arb_poly(ring4()), b in arb_poly(ring4())) {
            for v in ["a", "b", "c", "d"] {
                let lhs = (&a * &b).differentiate(v).unwrap();
                let rhs = &(&a.differentiate(v).unwrap() * &b) + &(&a * &b.differentiate(v).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly(ring4()), lex in any::<bool>()) {
            let ord = if lex { MonomialOrder::lex(4) } else { MonomialOrder::degrevlex(4) };
            let text = a.to_string_with(&ord);
            let back = parse(&text, &ring4()).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string_with(&ord), text);
        }
    }
}
