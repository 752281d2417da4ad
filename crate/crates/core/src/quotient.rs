//! Standard-monomial basis of `Q[x]/I` and the multiplication matrices.
//!
//! Column `j` of `M_v` holds the coordinates of `NF(b[j] * v)` in the basis
//! `b`, so `M_v` acts on coordinate columns: `coords(NF(v f)) = M_v coords(f)`.
//! The row-vector relation `v * b = b * M_v` uses the same matrix. Its left
//! eigenvectors (right eigenvectors of `M_v^T`) are the basis monomials
//! evaluated at the roots.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::groebner::GroebnerBasis;
use crate::polyring::{to_f64, Monomial, MonomialOrder, PolyError, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("ideal is not zero-dimensional: no leading term is a pure power of `{0}`")]
    NotZeroDimensional(String),
    #[error("the Groebner basis is not reduced")]
    NotReduced,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Standard monomials, sorted descending under the basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    ring: Ring,
    order: MonomialOrder,
    monomials: Vec<Monomial>,
}

impl QuotientBasis {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn labels(&self) -> Vec<String> {
        self.monomials
            .iter()
            .map(|m| m.display(self.ring.vars()).to_string())
            .collect()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.iter().position(|b| b == m)
    }

    /// Coordinates of an already reduced polynomial.
    ///
    /// Panics if `p` has a term outside the basis.
    pub fn coordinates(&self, p: &Polynomial) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.len()];
        for (m, c) in p.terms() {
            let i = self
                .index_of(m)
                .unwrap_or_else(|| panic!("term {:?} is not a standard monomial", m));
            out[i] = c.clone();
        }
        out
    }

    pub fn from_coordinates(&self, coords: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            self.monomials.iter().cloned().zip(coords.iter().cloned()),
        )
    }
}

/// Enumerates the monomials not divisible by any leading term of `gb`.
pub fn standard_monomials(gb: &GroebnerBasis) -> Result<QuotientBasis, QuotientError> {
    if !gb.is_reduced() {
        return Err(QuotientError::NotReduced);
    }
    let ring = gb.ring().clone();
    let n = ring.len();
    let lms = gb.leading_monomials();
    let mut bounds = vec![None::<u32>; n];
    for lm in &lms {
        if lm.is_one() {
            // unit ideal: empty quotient
            return Ok(QuotientBasis {
                ring,
                order: gb.order().clone(),
                monomials: Vec::new(),
            });
        }
        if let Some((i, k)) = lm.pure_power() {
            bounds[i] = Some(bounds[i].map_or(k, |b| b.min(k)));
        }
    }
    let bounds: Vec<u32> = bounds
        .iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| QuotientError::NotZeroDimensional(ring.vars()[i].clone())))
        .collect::<Result<_, _>>()?;

    let mut monomials = Vec::new();
    let mut ex = vec![0u32; n];
    'outer: loop {
        let m = Monomial::new(ex.clone());
        if !lms.iter().any(|lm| lm.divides(&m)) {
            monomials.push(m);
        }
        // odometer over the box prod [0, bound_i)
        for i in 0..n {
            ex[i] += 1;
            if ex[i] < bounds[i] {
                continue 'outer;
            }
            ex[i] = 0;
        }
        break;
    }
    let order = gb.order().clone();
    monomials.sort_by(|a, b| order.cmp(b, a));
    Ok(QuotientBasis {
        ring,
        order,
        monomials,
    })
}

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        QMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| !self.get(i, j).is_zero() && !v[j].is_zero())
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Row vector times matrix, `w * M`.
    pub fn vec_mul(&self, w: &[Rational]) -> Vec<Rational> {
        self.transpose().mul_vec(w)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| to_f64(self.get(i, j)))
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|a| to_f64(a).abs()).fold(0.0, f64::max)
    }

    /// Evaluates `p` at commuting matrices, one per ring variable.
    pub fn eval_polynomial(p: &Polynomial, mats: &[QMatrix]) -> QMatrix {
        let n = mats[0].n;
        let mut acc = QMatrix::zeros(n);
        for (m, c) in p.terms() {
            let mut t = QMatrix::identity(n).scale(c);
            for (mat, &e) in mats.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = &t * mat;
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(crate::polyring::format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Matrix of multiplication by `var` on the quotient.
pub fn mult_matrix(gb: &GroebnerBasis, basis: &QuotientBasis, var: &str) -> Result<QMatrix, QuotientError> {
    let ring = gb.ring();
    let vi = ring
        .index_of(var)
        .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
    let n = basis.len();
    let v = Monomial::var(vi, ring.len());
    let mut m = QMatrix::zeros(n);
    for (j, b) in basis.monomials.iter().enumerate() {
        let prod = Polynomial::monomial(ring, b.mul(&v), Rational::one());
        let nf = gb.normal_form(&prod);
        for (i, c) in basis.coordinates(&nf).into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

/// Multiplication matrices for every ring variable, over one basis.
#[derive(Clone, Debug)]
pub struct MultMatrixSet {
    basis: QuotientBasis,
    matrices: Vec<QMatrix>,
    relations: Vec<Polynomial>,
}

impl MultMatrixSet {
    pub fn new(gb: &GroebnerBasis) -> Result<Self, QuotientError> {
        let basis = standard_monomials(gb)?;
        let matrices = gb
            .ring()
            .vars()
            .iter()
            .map(|v| mult_matrix(gb, &basis, v))
            .collect::<Result<_, _>>()?;
        Ok(MultMatrixSet {
            basis,
            matrices,
            relations: gb.elements().to_vec(),
        })
    }

    /// Builds a set from explicit matrices, e.g. for non-commuting probes.
    pub fn from_parts(basis: QuotientBasis, matrices: Vec<QMatrix>) -> Self {
        assert_eq!(matrices.len(), basis.ring().len());
        MultMatrixSet {
            basis,
            matrices,
            relations: Vec::new(),
        }
    }

    /// Elements of the Groebner basis the matrices were built from.
    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Floating-point transposes `M_v^T`, the matrices whose right
    /// eigenvectors are the basis evaluated at the roots.
    pub fn transposes_f64(&self) -> Vec<DMatrix<f64>> {
        self.matrices.iter().map(|m| m.to_f64().transpose()).collect()
    }

    pub fn basis(&self) -> &QuotientBasis {
        &self.basis
    }

    pub fn variables(&self) -> &[String] {
        self.basis.ring().vars()
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, var: &str) -> Option<&QMatrix> {
        self.basis.ring().index_of(var).map(|i| &self.matrices[i])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutationReport {
    pub commute: bool,
    /// largest `|(AB - BA)_ij|` over all pairs, in floating point
    pub max_deviation: f64,
    pub failing_pairs: Vec<(String, String)>,
}

/// Exact pairwise commutation check.
pub fn check_commuting(set: &MultMatrixSet) -> CommutationReport {
    let names = set.variables();
    let mut max_deviation: f64 = 0.0;
    let mut failing_pairs = Vec::new();
    for i in 0..set.matrices.len() {
        for j in i + 1..set.matrices.len() {
            let (a, b) = (&set.matrices[i], &set.matrices[j]);
            let diff = &(a * b) - &(b * a);
            if !diff.is_zero() {
                failing_pairs.push((names[i].clone(), names[j].clone()));
                max_deviation = max_deviation.max(diff.max_abs_f64());
            }
        }
    }
    CommutationReport {
        commute: failing_pairs.is_empty(),
        max_deviation,
        failing_pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, GroebnerLimits, Ideal};
    use crate::hf_builder::{build_toy_ideal, ToyModelSpec};
    use crate::polyring::parse;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn toy_gb() -> GroebnerBasis {
        let ideal = build_toy_ideal(&ToyModelSpec::default()).unwrap();
        buchberger(&ideal, GroebnerLimits::default()).unwrap()
    }

    fn qm(rows: &[[(i64, i64); 4]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| q(a, b)).collect()).collect())
    }

    #[test]
    fn toy_standard_monomials() {
        let basis = standard_monomials(&toy_gb()).unwrap();
        assert_eq!(basis.labels(), vec!["y*e", "y", "e", "1"]);
    }

    #[test]
    fn single_point_quotient() {
        let ring = Ring::new(["x", "y"]).unwrap();
        let ideal = Ideal::new(
            vec![parse("x - 1", &ring).unwrap(), parse("y - 2", &ring).unwrap()],
            MonomialOrder::lex(2),
        )
        .unwrap();
        let gb = buchberger(&ideal, GroebnerLimits::default()).unwrap();
        let basis = standard_monomials(&gb).unwrap();
        assert_eq!(basis.labels(), vec!["1"]);
    }

    #[test]
    fn positive_dimensional_is_rejected() {
        let ring = Ring::new(["x", "y"]).unwrap();
        let ideal = Ideal::new(vec![parse("x*y - 1", &ring).unwrap()], MonomialOrder::lex(2)).unwrap();
        let gb = buchberger(&ideal, GroebnerLimits::default()).unwrap();
        assert_eq!(
            standard_monomials(&gb).unwrap_err(),
            QuotientError::NotZeroDimensional("x".into())
        );
    }

    #[test]
    fn toy_matrices_match_closed_forms() {
        let set = MultMatrixSet::new(&toy_gb()).unwrap();
        let h = (-1, 2);
        let z = (0, 1);
        let mx = qm(&[[z, z, z, (-1, 1)], [z, z, (-1, 1), z], [z, h, z, z], [h, z, z, z]]);
        let my = qm(&[[z, z, (1, 1), z], [z, z, z, (1, 1)], [(1, 2), z, z, z], [z, (1, 2), z, z]]);
        let me = qm(&[[z, (1, 1), z, z], [(1, 1), z, z, z], [z, z, z, (1, 1)], [z, z, (1, 1), z]]);
        assert_eq!(set.matrix("x").unwrap(), &mx);
        assert_eq!(set.matrix("y").unwrap(), &my);
        assert_eq!(set.matrix("e").unwrap(), &me);
        assert!(check_commuting(&set).commute);
    }

    #[test]
    fn perturbed_pair_does_not_commute() {
        let set = MultMatrixSet::new(&toy_gb()).unwrap();
        let mut mats = set.matrices().to_vec();
        mats[0].set(0, 0, q(1, 3));
        let report = check_commuting(&MultMatrixSet::from_parts(set.basis().clone(), mats));
        assert!(!report.commute);
        assert!(report.max_deviation > 0.0);
        assert!(report.failing_pairs.contains(&("x".to_string(), "y".to_string())));
    }

    #[test]
    fn matrices_satisfy_the_basis() {
        let gb = toy_gb();
        let set = MultMatrixSet::new(&gb).unwrap();
        for g in gb.elements() {
            assert!(QMatrix::eval_polynomial(g, set.matrices()).is_zero());
        }
    }

    #[test]
    fn arbitrary_degenerate_eigenbasis_is_not_shared() {
        // w1, w2 span the e = -1 eigenspace of m_e but are not eigenvectors of m_x, m_y
        let set = MultMatrixSet::new(&toy_gb()).unwrap();
        let w1 = [q(0, 1), q(0, 1), q(-1, 1), q(1, 1)];
        let w2 = [q(-1, 1), q(1, 1), q(0, 1), q(0, 1)];
        let me = set.matrix("e").unwrap();
        let neg = |w: &[Rational; 4]| w.iter().map(|a| -a).collect::<Vec<_>>();
        assert_eq!(me.vec_mul(&w1), neg(&w1));
        assert_eq!(me.vec_mul(&w2), neg(&w2));
        let mx = set.matrix("x").unwrap();
        let my = set.matrix("y").unwrap();
        assert_eq!(mx.vec_mul(&w1), vec![q(-1, 2), q(1, 2), q(0, 1), q(0, 1)]);
        assert_eq!(mx.vec_mul(&w2), vec![q(0, 1), q(0, 1), q(-1, 1), q(1, 1)]);
        assert_eq!(my.vec_mul(&w1), vec![q(-1, 2), q(1, 2), q(0, 1), q(0, 1)]);
        assert_eq!(my.vec_mul(&w2), vec![q(0, 1), q(0, 1), q(-1, 1), q(1, 1)]);
        // not proportional to w1 or w2: no shared eigenvector
        for w in [&w1, &w2] {
            let img = mx.vec_mul(w);
            let proportional = (0..4).all(|i| (0..4).all(|j| &img[i] * &w[j] == &img[j] * &w[i]));
            assert!(!proportional);
        }
    }
}
