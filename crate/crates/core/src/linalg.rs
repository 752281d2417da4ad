//! Dense complex linear-algebra helpers shared by `rootfind` and `qblock`.

use nalgebra::{DMatrix, DVector, Schur, SVD};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn complexify(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| C64::new(x, 0.0))
}

pub fn is_real(a: &CMatrix) -> bool {
    a.iter().all(|z| z.im == 0.0)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry magnitude of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Deflation tolerances tried in turn; the tightest one can stall on badly
/// scaled matrices.
const SCHUR_EPS: [f64; 4] = [f64::EPSILON, 1e-14, 1e-13, 1e-12];

/// Eigenvalues with multiplicity via the Schur form.
///
/// Real input goes through the real Schur form so complex eigenvalues come
/// out as exact conjugate pairs. `None` if the QR iteration hits `max_iter`
/// at every deflation tolerance.
/// Eigenvalues of a real quasi-triangular Schur factor. A complex square root
/// keeps nearly repeated 2x2 blocks finite.
fn quasi_triangular_eigenvalues(t: &DMatrix<f64>) -> Vec<C64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mid = C64::new((a + d) / 2.0, 0.0);
            let disc = C64::new(((a - d) / 2.0).powi(2) + b * c, 0.0).sqrt();
            out.push(mid + disc);
            out.push(mid - disc);
            i += 2;
        } else {
            out.push(C64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

pub fn eigenvalues(a: &CMatrix, max_iter: usize) -> Option<Vec<C64>> {
    let n = a.nrows();
    match n {
        0 => Some(Vec::new()),
        1 => Some(vec![a[(0, 0)]]),
        _ if is_real(a) => {
            let re = a.map(|z| z.re);
            let s = SCHUR_EPS.iter().find_map(|&eps| Schur::try_new(re.clone(), eps, max_iter))?;
            let (_, t) = s.unpack();
            let ev = quasi_triangular_eigenvalues(&t);
            ev.iter().all(|z| z.is_finite()).then_some(ev)
        }
        _ => {
            let s = SCHUR_EPS.iter().find_map(|&eps| Schur::try_new(a.clone(), eps, max_iter))?;
            let (_, t) = s.unpack();
            let ev: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
            ev.iter().all(|z| z.is_finite()).then_some(ev)
        }
    }
}

/// Right singular vectors for the `k` smallest singular values, as columns,
/// and all singular values in descending order.
pub fn smallest_singular_vectors(m: &CMatrix, k: usize) -> (CMatrix, Vec<f64>) {
    let n = m.ncols();
    // a real SVD keeps eigenvectors of real eigenvalues real
    let (vt, sv) = if is_real(m) {
        let svd = SVD::new(m.map(|z| z.re), false, true);
        (complexify(&svd.v_t.expect("requested V")), svd.singular_values)
    } else {
        let svd = SVD::new(m.clone(), false, true);
        (svd.v_t.expect("requested V"), svd.singular_values)
    };
    let cols: Vec<CVector> = (n - k..n).map(|i| vt.row(i).adjoint()).collect();
    let basis = if cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&cols)
    };
    (basis, sv.iter().copied().collect())
}

/// Orthonormal basis of the column span (thin QR).
pub fn orthonormalize(m: &CMatrix) -> CMatrix {
    if m.ncols() == 0 {
        return m.clone();
    }
    m.clone().qr().q()
}

pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Scales to unit norm and rotates the phase so the largest-magnitude entry
/// is real and positive.
pub fn normalize_phase(v: &CVector) -> CVector {
    let norm = v.norm();
    if norm == 0.0 {
        return v.clone();
    }
    let mut best = 0;
    for i in 0..v.len() {
        if v[i].norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let phase = v[best] / v[best].norm();
    v.map(|z| z / phase / norm)
}

/// Groups values whose distance chains below `tol` (single linkage).
/// Groups are returned in order of first appearance.
pub fn cluster(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// `exp(-i M)`.
pub fn expm_minus_i(m: &CMatrix) -> CMatrix {
    (m * c(0.0, -1.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_pairs_are_exact_for_real_input() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
        let mut ev = eigenvalues(&complexify(&a), 1000).unwrap();
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert_eq!(ev[0], ev[2].conj());
        assert!((ev[0] - c(0.0, -2.0)).norm() < 1e-12);
        assert!((ev[1] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn complex_triangular_eigenvalues() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, 0.0), c(-1.0, 0.5)]);
        let mut ev = eigenvalues(&a, 1000).unwrap();
        ev.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((ev[0] - c(-1.0, 0.5)).norm() < 1e-12);
        assert!((ev[1] - c(1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_deficient() {
        let a = complexify(&DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        let (v, s) = smallest_singular_vectors(&a, 1);
        assert!(s[1] < 1e-14);
        assert!((&a * &v).norm() < 1e-14);
    }

    #[test]
    fn clustering_chains() {
        let v = [c(0.0, 0.0), c(1.0, 0.0), c(1e-9, 0.0), c(1.0 + 1e-9, 0.0), c(5.0, 0.0)];
        assert_eq!(cluster(&v, 1e-6), vec![vec![0, 2], vec![1, 3], vec![4]]);
    }

    #[test]
    fn exponential_of_diagonal() {
        let m = complexify(&DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0])));
        let e = expm_minus_i(&m);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - c(1f64.cos(), -(1f64.sin()))).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-14);
    }
}
