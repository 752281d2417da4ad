//! Builders for the polynomial systems the pipeline solves: the two-site
//! secular toy model, the HeH+ restricted Hartree-Fock optimality system, and
//! binary (QUBO-style) energy models.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{GroebnerError, Ideal};
use crate::polyring::{
    format_rational, parse, parse_rational, Monomial, MonomialOrder, OrderKind, PolyError, Polynomial,
    Rational, Ring,
};

/// STO-3G HeH+ energy functional in `(R, x, y, e)` with integer coefficients.
pub const HEH_PLUS_OBJECTIVE: &str = include_str!("../fixtures/heh_plus_obj.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HfError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("objective must be a polynomial in (R, x, y, e); missing `{0}`")]
    MissingVariable(&'static str),
    #[error("the R constraint must be linear in R")]
    ConstraintNotLinear,
    #[error("QUBO variable index {index} out of range for {num_vars} variables")]
    QuboIndex { index: usize, num_vars: usize },
    #[error("QUBO model needs at least one binary variable")]
    QuboEmpty,
}

pub fn toy_ring() -> Ring {
    Ring::new(["x", "y", "e"]).expect("valid names")
}

/// On-site potential `V(x, y)` of the two-site secular problem.
#[derive(Clone, Debug)]
pub struct ToyModelSpec {
    pub potential: Polynomial,
}

impl Default for ToyModelSpec {
    fn default() -> Self {
        ToyModelSpec {
            potential: Polynomial::zero(&Ring::new(["x", "y"]).expect("valid names")),
        }
    }
}

/// `(x V - y - e x, y V - x - e y, x^2 + y^2 - 1)` in `Q[x, y, e]`, lex `x > y > e`.
pub fn build_toy_ideal(spec: &ToyModelSpec) -> Result<Ideal, HfError> {
    let ring = toy_ring();
    let v = spec.potential.embed(&ring)?;
    if v.degree_in(2) > 0 {
        return Err(PolyError::UnknownVariable("e".into()).into());
    }
    let x = Polynomial::var(&ring, "x")?;
    let y = Polynomial::var(&ring, "y")?;
    let e = Polynomial::var(&ring, "e")?;
    let one = Polynomial::one(&ring);
    let f1 = &(&(&x * &v) - &y) - &(&e * &x);
    let f2 = &(&(&y * &v) - &x) - &(&e * &y);
    let f3 = &(&(&x * &x) + &(&y * &y)) - &one;
    Ok(Ideal::new(vec![f1, f2, f3], MonomialOrder::lex(3))?)
}

/// Objective functional `f(R, x, y, e)` together with the equation that
/// pins the interatomic distance.
#[derive(Clone, Debug)]
pub struct ObjectiveSpec {
    pub objective: Polynomial,
    pub r_constraint: Polynomial,
    /// When set, `R` is eliminated by exact substitution.
    pub fixed_r: Option<Rational>,
}

pub fn objective_ring() -> Ring {
    Ring::new(["R", "x", "y", "e"]).expect("valid names")
}

/// Strips an optional `NAME =` prefix and trailing `;` from a fixture listing.
pub fn strip_listing(text: &str) -> &str {
    let mut t = text.trim();
    if let Some(rest) = t.strip_suffix(';') {
        t = rest.trim_end();
    }
    if let Some((lhs, rhs)) = t.split_once('=') {
        if crate::polyring::is_identifier(lhs.trim()) {
            t = rhs.trim();
        }
    }
    t
}

impl ObjectiveSpec {
    /// Parses an objective listing in `(R, x, y, e)` and pins `R` with
    /// `100 R - 146`, leaving `R` in the ring.
    pub fn from_listing(text: &str) -> Result<Self, HfError> {
        let ring = objective_ring();
        let objective = parse(strip_listing(text), &ring)?;
        let r_constraint = parse("100*R - 146", &ring)?;
        Ok(ObjectiveSpec {
            objective,
            r_constraint,
            fixed_r: None,
        })
    }

    pub fn heh_plus() -> Self {
        Self::from_listing(HEH_PLUS_OBJECTIVE).expect("bundled fixture parses")
    }

    /// Pins `R = value` (constraint `den*R - num`) and eliminates it.
    pub fn with_fixed_r(mut self, value: Rational) -> Self {
        let ring = self.objective.ring().clone();
        let r = Polynomial::var(&ring, "R").expect("objective ring has R");
        let den = Polynomial::constant(&ring, Rational::from_integer(value.denom().clone()));
        let num = Polynomial::constant(&ring, Rational::from_integer(value.numer().clone()));
        self.r_constraint = &(&den * &r) - &num;
        self.fixed_r = Some(value);
        self
    }

    /// Root of the (linear) R constraint.
    pub fn constraint_root(&self) -> Result<Rational, HfError> {
        let ring = self.r_constraint.ring();
        let ri = ring.index_of("R").ok_or(HfError::MissingVariable("R"))?;
        if self.r_constraint.degree_in(ri) != 1 || self.r_constraint.total_degree() != Some(1) {
            return Err(HfError::ConstraintNotLinear);
        }
        let mut lin = Rational::zero();
        let mut constant = Rational::zero();
        for (m, c) in self.r_constraint.terms() {
            if m.is_one() {
                constant = c.clone();
            } else if m.exponents()[ri] == 1 {
                lin = c.clone();
            } else {
                return Err(HfError::ConstraintNotLinear);
            }
        }
        Ok(-constant / lin)
    }
}

/// `(df/dx, df/dy, df/de, constraint)` under degrevlex `x > y > e`.
///
/// With `fixed_r` set, `R` is substituted into the three derivatives and the
/// result is a 3-generator ideal in `Q[x, y, e]`. Otherwise the ideal keeps
/// `R` as the smallest variable and includes the constraint.
pub fn build_hf_ideal(spec: &ObjectiveSpec) -> Result<Ideal, HfError> {
    let ring = spec.objective.ring();
    for v in ["R", "x", "y", "e"] {
        if ring.index_of(v).is_none() {
            return Err(HfError::MissingVariable(v));
        }
    }
    let derivs = ["x", "y", "e"]
        .iter()
        .map(|v| spec.objective.differentiate(v))
        .collect::<Result<Vec<_>, _>>()?;
    match &spec.fixed_r {
        Some(r) => {
            let root = spec.constraint_root()?;
            if &root != r {
                return Err(HfError::ConstraintNotLinear);
            }
            let gens = derivs
                .iter()
                .map(|d| d.substitute("R", r))
                .collect::<Result<Vec<_>, _>>()?;
            let sub_ring = gens[0].ring().clone();
            let order = MonomialOrder::with_names(OrderKind::Degrevlex, &sub_ring, &["x", "y", "e"])?;
            Ok(Ideal::new(gens, order)?)
        }
        None => {
            spec.constraint_root()?;
            let constraint = spec.r_constraint.embed(ring)?;
            let mut gens = derivs;
            gens.push(constraint);
            let order = MonomialOrder::with_names(OrderKind::Degrevlex, ring, &["x", "y", "e", "R"])?;
            Ok(Ideal::new(gens, order)?)
        }
    }
}

/// Binary energy model `sum_S C_S prod_{i in S} x_i` over `x_i in {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuboModel {
    num_vars: usize,
    /// index sets (sorted, distinct) to coefficients
    terms: BTreeMap<Vec<usize>, Rational>,
}

#[derive(Serialize, Deserialize)]
struct QuboTermJson {
    vars: Vec<usize>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct QuboJson {
    num_vars: usize,
    terms: Vec<QuboTermJson>,
}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        QuboModel {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `coef * prod x_i`. Indices are 0-based; repeats collapse since
    /// `x_i^2 = x_i` on binary points.
    pub fn add_term(&mut self, indices: &[usize], coef: Rational) -> Result<(), HfError> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.num_vars) {
            return Err(HfError::QuboIndex {
                index: bad,
                num_vars: self.num_vars,
            });
        }
        let slot = self.terms.entry(idx).or_insert_with(Rational::zero);
        *slot += coef;
        Ok(())
    }

    /// Linear and pairwise coefficients, the common QUBO case.
    pub fn from_linear_quadratic(
        linear: &[Rational],
        couplings: &[((usize, usize), Rational)],
    ) -> Result<Self, HfError> {
        let mut m = QuboModel::new(linear.len());
        for (i, c) in linear.iter().enumerate() {
            m.add_term(&[i], c.clone())?;
        }
        for ((i, j), c) in couplings {
            m.add_term(&[*i, *j], c.clone())?;
        }
        Ok(m)
    }

    pub fn energy(&self, assignment: &[bool]) -> Rational {
        self.terms
            .iter()
            .filter(|(idx, _)| idx.iter().all(|&i| assignment[i]))
            .map(|(_, c)| c.clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Every binary assignment with its energy, in counting order.
    pub fn enumerate(&self) -> Vec<(Vec<bool>, Rational)> {
        (0..1usize << self.num_vars)
            .map(|bits| {
                let a: Vec<bool> = (0..self.num_vars).map(|i| bits >> i & 1 == 1).collect();
                let e = self.energy(&a);
                (a, e)
            })
            .collect()
    }

    pub fn ring(&self) -> Ring {
        let mut names: Vec<String> = (1..=self.num_vars).map(|i| format!("x{i}")).collect();
        names.push("e".into());
        Ring::new(names).expect("valid names")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: QuboJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut m = QuboModel::new(raw.num_vars);
        for t in raw.terms {
            let c = parse_rational(&t.coef).map_err(|e| e.to_string())?;
            m.add_term(&t.vars, c).map_err(|e| e.to_string())?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let raw = QuboJson {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(v, c)| QuboTermJson {
                    vars: v.clone(),
                    coef: format_rational(c),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

/// `(sum_S C_S prod x_i - e, x_1^2 - x_1, ..., x_n^2 - x_n)` in
/// `Q[x_1..x_n, e]`, degrevlex `x_1 > ... > x_n > e`.
pub fn build_qubo_ideal(model: &QuboModel) -> Result<Ideal, HfError> {
    if model.num_vars == 0 {
        return Err(HfError::QuboEmpty);
    }
    let ring = model.ring();
    let n = model.num_vars;
    let mut energy = Polynomial::zero(&ring);
    for (idx, c) in &model.terms {
        let mut ex = vec![0; n + 1];
        for &i in idx {
            ex[i] = 1;
        }
        energy.add_term(Monomial::new(ex), c.clone());
    }
    energy.add_term(Monomial::var(n, n + 1), -Rational::one());
    let mut gens = vec![energy];
    for i in 0..n {
        let mut sq = vec![0; n + 1];
        sq[i] = 2;
        gens.push(Polynomial::from_terms(
            &ring,
            [
                (Monomial::new(sq), Rational::one()),
                (Monomial::var(i, n + 1), -Rational::one()),
            ],
        ));
    }
    Ok(Ideal::new(gens, MonomialOrder::degrevlex(n + 1))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, GroebnerLimits};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn toy_ideal_generators() {
        let ideal = build_toy_ideal(&ToyModelSpec::default()).unwrap();
        let ring = toy_ring();
        let expect = ["-y - e*x", "-x - e*y", "x^2 + y^2 - 1"].map(|s| parse(s, &ring).unwrap());
        assert_eq!(ideal.generators(), &expect);
    }

    #[test]
    fn toy_ideal_with_potential() {
        let v = parse("x^2", &Ring::new(["x", "y"]).unwrap()).unwrap();
        let ideal = build_toy_ideal(&ToyModelSpec { potential: v }).unwrap();
        let ring = toy_ring();
        let expect = ["x^3 - y - e*x", "y*x^2 - x - e*y", "x^2 + y^2 - 1"].map(|s| parse(s, &ring).unwrap());
        assert_eq!(ideal.generators(), &expect);
    }

    #[test]
    fn toy_ideal_reaches_secular_basis() {
        let ideal = build_toy_ideal(&ToyModelSpec::default()).unwrap();
        let gb = buchberger(&ideal, GroebnerLimits::default()).unwrap();
        let ring = toy_ring();
        let expect = ["e^2 - 1", "y^2 - 1/2", "x + y*e"].map(|s| parse(s, &ring).unwrap());
        assert_eq!(gb.elements(), &expect);
    }

    #[test]
    fn fixture_parses() {
        let spec = ObjectiveSpec::heh_plus();
        let origin = vec![Rational::zero(); 4];
        assert_eq!(spec.objective.eval_rational(&origin), q(79999, 1));
        let de = spec.objective.differentiate("e").unwrap();
        let inner = parse(
            "114*R^5*x*y - 1281*R^4*x*y + 5600*R^3*x*y - 10194*R^2*x*y + 115*R*x*y + 10000*x^2 \
             + 18221*x*y + 10000*y^2 - 10000",
            &objective_ring(),
        )
        .unwrap();
        assert_eq!(de, inner.scale(&q(-2, 1)));
        assert_eq!(spec.constraint_root().unwrap(), q(73, 50));
    }

    #[test]
    fn hf_ideal_shapes() {
        let spec = ObjectiveSpec::heh_plus();
        let full = build_hf_ideal(&spec).unwrap();
        assert_eq!(full.generators().len(), 4);
        assert_eq!(full.ring().len(), 4);
        let fixed = build_hf_ideal(&spec.with_fixed_r(q(146, 100))).unwrap();
        assert_eq!(fixed.generators().len(), 3);
        assert_eq!(fixed.ring().vars(), &["x", "y", "e"]);
    }

    #[test]
    fn quadratic_objective_ideal() {
        let ring = objective_ring();
        let spec = ObjectiveSpec {
            objective: parse("x^2 + y^2 + e^2", &ring).unwrap(),
            r_constraint: parse("100*R - 146", &ring).unwrap(),
            fixed_r: None,
        };
        let ideal = build_hf_ideal(&spec).unwrap();
        let expect = ["2*x", "2*y", "2*e", "100*R - 146"].map(|s| parse(s, &ring).unwrap());
        assert_eq!(ideal.generators(), &expect);
        let bad = ObjectiveSpec {
            r_constraint: parse("R^2 - 2", &ring).unwrap(),
            ..spec
        };
        assert_eq!(build_hf_ideal(&bad).unwrap_err(), HfError::ConstraintNotLinear);
    }

    #[test]
    fn qubo_single_variable() {
        let m = QuboModel::from_linear_quadratic(&[q(3, 1)], &[]).unwrap();
        let ideal = build_qubo_ideal(&m).unwrap();
        let ring = m.ring();
        let expect = ["3*x1 - e", "x1^2 - x1"].map(|s| parse(s, &ring).unwrap());
        assert_eq!(ideal.generators(), &expect);
        let energies: Vec<_> = m.enumerate().into_iter().map(|(_, e)| e).collect();
        assert_eq!(energies, vec![q(0, 1), q(3, 1)]);
    }

    #[test]
    fn qubo_pair_energies() {
        let m = QuboModel::from_linear_quadratic(&[q(1, 1), q(1, 1)], &[((0, 1), q(2, 1))]).unwrap();
        let mut energies: Vec<_> = m.enumerate().into_iter().map(|(_, e)| e).collect();
        energies.sort();
        assert_eq!(energies, vec![q(0, 1), q(1, 1), q(1, 1), q(4, 1)]);
        assert!(QuboModel::from_linear_quadratic(&[q(1, 1)], &[((0, 3), q(1, 1))]).is_err());
        let back = QuboModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn listing_prefix_is_stripped() {
        assert_eq!(strip_listing("OBJ=x + 1;\n"), "x + 1");
        assert_eq!(strip_listing("x + 1"), "x + 1");
    }
}
