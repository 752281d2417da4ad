//! Numeric roots from the transposed multiplication matrices.
//!
//! One matrix (by default the last variable's) is decomposed first. Each of
//! its eigenspaces is then split by the projected eigenproblem of the next
//! matrix, and so on through all variables, so degenerate eigenvalues never
//! leave an arbitrary basis choice behind. Root components are Rayleigh
//! quotients over the final common eigenspaces.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    cluster, complexify, eigenvalues, frobenius, normalize_phase, orthonormalize, smallest_singular_value,
    smallest_singular_vectors, CMatrix, CVector, C64,
};
use crate::polyring::Polynomial;
use crate::quotient::{check_commuting, MultMatrixSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("eigenvalue iteration did not converge on a {0}x{0} matrix")]
    NoConvergence(usize),
    #[error("multiplication matrices do not commute: {0:?}")]
    NotCommuting(Vec<(String, String)>),
    #[error("cannot split the {dim}-dimensional eigenspace of `{variable}` near {value}")]
    SplitFailure { variable: String, value: C64, dim: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// relative to the Frobenius norm
    pub residual_tol: f64,
    /// eigenvalues closer than `cluster_tol * (1 + max |eigenvalue|)` are one eigenspace
    pub cluster_tol: f64,
    pub max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            residual_tol: 1e-8,
            cluster_tol: 1e-6,
            max_iterations: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: C64,
    /// unit 2-norm, largest entry real positive
    pub vector: CVector,
    /// `||A v - value v||_2`
    pub residual: f64,
}

impl EigenPair {
    pub fn is_accurate(&self, a_norm: f64, tol: f64) -> bool {
        self.residual <= tol * a_norm.max(f64::MIN_POSITIVE)
    }
}

/// An invariant subspace for one eigenvalue cluster, with orthonormal columns.
/// Its dimension is the algebraic multiplicity.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub value: C64,
    pub basis: CMatrix,
}

fn cmp_c64(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Generalized eigenspaces of `a`, sorted by eigenvalue (real part, then imaginary).
pub fn eigenspaces(a: &CMatrix, opts: &EigenOptions) -> Result<Vec<Eigenspace>, RootError> {
    let n = a.nrows();
    let vals = eigenvalues(a, opts.max_iterations).ok_or(RootError::NoConvergence(n))?;
    let scale = 1.0 + vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = opts.cluster_tol * scale;
    let real_input = crate::linalg::is_real(a);
    let mut spaces = Vec::new();
    for group in cluster(&vals, tol) {
        let m = group.len();
        let mut value = group.iter().map(|&i| vals[i]).sum::<C64>() / m as f64;
        if real_input && value.im.abs() <= tol {
            value.im = 0.0;
        }
        // conjugate partners are filled in from the upper half-plane
        if real_input && value.im < 0.0 {
            continue;
        }
        let basis = cluster_basis(a, value, m);
        if real_input && value.im > 0.0 {
            spaces.push(Eigenspace {
                value: value.conj(),
                basis: basis.map(|z| z.conj()),
            });
        }
        spaces.push(Eigenspace { value, basis });
    }
    spaces.sort_by(|a, b| cmp_c64(&a.value, &b.value));
    Ok(spaces)
}

fn cluster_basis(a: &CMatrix, value: C64, m: usize) -> CMatrix {
    let n = a.nrows();
    let shifted = a - CMatrix::identity(n, n) * value;
    // (A - value)^m annihilates the whole generalized eigenspace
    let mut target = shifted.clone();
    for _ in 1..m {
        target = &target * &shifted;
    }
    smallest_singular_vectors(&target, m).0
}

/// Eigenpairs of a real matrix, with multiplicity.
pub fn eigen_decompose(a: &DMatrix<f64>) -> Result<Vec<EigenPair>, RootError> {
    eigen_decompose_with(&complexify(a), &EigenOptions::default())
}

pub fn eigen_decompose_with(a: &CMatrix, opts: &EigenOptions) -> Result<Vec<EigenPair>, RootError> {
    let mut out = Vec::new();
    for space in eigenspaces(a, opts)? {
        for col in space.basis.column_iter() {
            let v = normalize_phase(&col.into_owned());
            let residual = (a * &v - &v * space.value).norm();
            out.push(EigenPair {
                value: space.value,
                vector: v,
                residual,
            });
        }
    }
    Ok(out)
}

/// `(v^H M^T v) / (v^H v)`: the eigenvalue of `M^T` carried by `v` when `v`
/// is a common eigenvector.
pub fn rayleigh_component(m: &DMatrix<f64>, v: &CVector) -> Result<C64, RootError> {
    let vv = v.dotc(v);
    if vv.norm() == 0.0 {
        return Err(RootError::ZeroVector);
    }
    let mt = complexify(&m.transpose());
    Ok(v.dotc(&(mt * v)) / vv)
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// variable whose matrix is decomposed first; default the last one
    pub decompose: Option<String>,
    pub eigen: EigenOptions,
    /// default `1e-8 * (1 + max |component|)`
    pub real_tol: Option<f64>,
    /// relative generator residual bound
    pub eval_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            decompose: None,
            eigen: EigenOptions::default(),
            real_tol: None,
            eval_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootClass {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

fn ser_complex_vec<S: serde::Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| ComplexJson { re: z.re, im: z.im }))
}

#[derive(Clone, Debug, Serialize)]
pub struct Root {
    /// one value per ring variable
    #[serde(serialize_with = "ser_complex_vec")]
    pub values: Vec<C64>,
    pub class: RootClass,
    /// `|f(root)| / (1 + ||f||_2)` per Groebner basis element
    pub residuals: Vec<f64>,
}

impl Root {
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

/// Relative residuals `|f(point)| / (1 + ||f||_2)`.
pub fn relative_residuals(polys: &[Polynomial], point: &[C64]) -> Vec<f64> {
    polys
        .iter()
        .map(|f| f.eval_complex(point).norm() / (1.0 + f.coefficient_norm()))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    pub variables: Vec<String>,
    pub roots: Vec<Root>,
    pub real_tol: f64,
    pub eval_tol: f64,
    /// roots removed by `filter_real`
    pub discarded: usize,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots
            .iter()
            .flat_map(|r| r.residuals.iter().copied())
            .fold(0.0, f64::max)
    }

    pub fn residuals_ok(&self) -> bool {
        self.max_residual() <= self.eval_tol
    }

    pub fn real_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.class == RootClass::Real)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("root set serializes")
    }
}

/// Roots of the ideal behind `set`, with multiplicity.
pub fn solve_system(set: &MultMatrixSet, opts: &SolveOptions) -> Result<RootSet, RootError> {
    let vars = set.variables().to_vec();
    let nvars = vars.len();
    let report = check_commuting(set);
    if !report.commute {
        return Err(RootError::NotCommuting(report.failing_pairs));
    }
    let first = match &opts.decompose {
        Some(name) => vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| RootError::UnknownVariable(name.clone()))?,
        None => nvars - 1,
    };
    let order: Vec<usize> = std::iter::once(first).chain((0..nvars).filter(|&i| i != first)).collect();
    let ts: Vec<CMatrix> = set.transposes_f64().iter().map(complexify).collect();
    let n = set.dim();

    let mut leaves = Vec::new();
    if n > 0 {
        split(&ts, &order, &vars, CMatrix::identity(n, n), 0, &opts.eigen, &mut leaves)?;
    }

    let mut roots = Vec::new();
    for v in &leaves {
        let k = v.ncols() as f64;
        let values: Vec<C64> = ts.iter().map(|t| (v.adjoint() * t * v).trace() / k).collect();
        for _ in 0..v.ncols() {
            roots.push(values.clone());
        }
    }
    let scale = roots
        .iter()
        .flat_map(|r| r.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let real_tol = opts.real_tol.unwrap_or(1e-8 * (1.0 + scale));
    let mut roots: Vec<Root> = roots
        .into_iter()
        .map(|values| {
            let class = if values.iter().all(|z| z.im.abs() <= real_tol) {
                RootClass::Real
            } else {
                RootClass::Complex
            };
            let residuals = relative_residuals(set.relations(), &values);
            Root {
                values,
                class,
                residuals,
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| cmp_c64(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    Ok(RootSet {
        variables: vars,
        roots,
        real_tol,
        eval_tol: opts.eval_tol,
        discarded: 0,
    })
}

fn split(
    ts: &[CMatrix],
    order: &[usize],
    vars: &[String],
    v: CMatrix,
    level: usize,
    opts: &EigenOptions,
    out: &mut Vec<CMatrix>,
) -> Result<(), RootError> {
    if level == order.len() {
        out.push(v);
        return Ok(());
    }
    let var = order[level];
    let projected = v.adjoint() * &ts[var] * &v;
    let spaces = eigenspaces(&projected, opts)?;
    let all: Vec<_> = spaces.iter().flat_map(|s| s.basis.column_iter()).collect();
    if all.len() != v.ncols() || smallest_singular_value(&CMatrix::from_columns(&all)) < 1e-6 {
        return Err(RootError::SplitFailure {
            variable: vars[var].clone(),
            value: spaces.first().map(|s| s.value).unwrap_or_default(),
            dim: v.ncols(),
        });
    }
    for s in spaces {
        let w = orthonormalize(&(&v * &s.basis));
        split(ts, order, vars, w, level + 1, opts, out)?;
    }
    Ok(())
}

/// Keeps roots whose components all have `|Im| <= real_tol`.
pub fn filter_real(rs: &RootSet, real_tol: f64) -> RootSet {
    let kept: Vec<Root> = rs
        .roots
        .iter()
        .filter(|r| r.max_imag() <= real_tol)
        .cloned()
        .collect();
    RootSet {
        variables: rs.variables.clone(),
        discarded: rs.discarded + rs.roots.len() - kept.len(),
        roots: kept,
        real_tol,
        eval_tol: rs.eval_tol,
    }
}

/// Largest `||A v - lambda v|| / ||A||_F` over a set of pairs.
pub fn max_relative_residual(a: &CMatrix, pairs: &[EigenPair]) -> f64 {
    let f = frobenius(a).max(f64::MIN_POSITIVE);
    pairs.iter().map(|p| p.residual / f).fold(0.0, f64::max)
}
