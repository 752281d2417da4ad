use crate::linalg::{c, CMatrix, CVector, C64};

use super::QBlockError;

/// `n` with `dim = 2^n`.
pub fn signal_qubits(dim: usize) -> Result<usize, QBlockError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QBlockError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn check_square(a: &CMatrix) -> Result<usize, QBlockError> {
    if a.nrows() != a.ncols() {
        return Err(QBlockError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    signal_qubits(a.nrows())
}

pub(crate) fn max_entry(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `1 / max |a_ij|` when some entry exceeds one in magnitude, else 1.
pub fn default_alpha(a: &CMatrix) -> f64 {
    let m = max_entry(a);
    if m > 1.0 {
        1.0 / m
    } else {
        1.0
    }
}

#[derive(Clone, Debug)]
pub struct QueryOracle {
    pub unitary: CMatrix,
    pub alpha: f64,
    pub source: CMatrix,
    pub signal_qubits: usize,
}

/// `O_A |0>|i>|j> = (a|0> + s|1>)|i>|j>` with `a = alpha * a_ij` and
/// `s = sqrt(1 - |a|^2)`.
///
/// The 2x2 block on the ancilla is `[[a, -s], [s, conj(a)]]`. For real entries
/// this is the rotation by `theta = arccos(a)`; for complex entries it is
/// `Rz(-arg a) Ry(2 arccos|a|) Rz(-arg a)`.
pub fn query_oracle(a: &CMatrix, alpha: f64) -> Result<QueryOracle, QBlockError> {
    let n = check_square(a)?;
    let max_entry = max_entry(a);
    if alpha.is_nan() || alpha <= 0.0 || alpha * max_entry > 1.0 + 1e-12 {
        return Err(QBlockError::AlphaOutOfRange { alpha, max_entry });
    }
    let dim = a.nrows();
    let n2 = dim * dim;
    let mut u = CMatrix::zeros(2 * n2, 2 * n2);
    for i in 0..dim {
        for j in 0..dim {
            let l = i * dim + j;
            let mut v = a[(i, j)] * alpha;
            if v.norm() > 1.0 {
                v /= v.norm();
            }
            let s = c((1.0 - v.norm_sqr()).max(0.0).sqrt(), 0.0);
            u[(l, l)] = v;
            u[(l, n2 + l)] = -s;
            u[(n2 + l, l)] = s;
            u[(n2 + l, n2 + l)] = v.conj();
        }
    }
    Ok(QueryOracle {
        unitary: u,
        alpha,
        source: a.clone(),
        signal_qubits: n,
    })
}

#[derive(Clone, Debug)]
pub struct BlockEncoding {
    pub unitary: CMatrix,
    pub signal_qubits: usize,
    pub alpha: f64,
    pub source: CMatrix,
}

/// Hadamard on every qubit of an `n`-qubit register.
pub(crate) fn hadamard_n(n: usize) -> CMatrix {
    let dim = 1usize << n;
    let s = 1.0 / (dim as f64).sqrt();
    CMatrix::from_fn(dim, dim, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            c(s, 0.0)
        } else {
            c(-s, 0.0)
        }
    })
}

pub(crate) fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `U_A = (I (x) H^n (x) I)(I (x) SWAP) O_A (I (x) H^n (x) I)`.
pub fn assemble_ua(oracle: &QueryOracle) -> Result<BlockEncoding, QBlockError> {
    let n = oracle.signal_qubits;
    let dim = 1usize << n;
    let total = 2 * dim * dim;
    if oracle.unitary.nrows() != total {
        return Err(QBlockError::DimensionMismatch {
            expected: total,
            got: oracle.unitary.nrows(),
        });
    }
    let id2 = CMatrix::identity(2, 2);
    let idn = CMatrix::identity(dim, dim);
    let h = kron(&kron(&id2, &hadamard_n(n)), &idn);
    let mut swap = CMatrix::zeros(total, total);
    for anc in 0..2 {
        for r1 in 0..dim {
            for r2 in 0..dim {
                let from = anc * dim * dim + r1 * dim + r2;
                let to = anc * dim * dim + r2 * dim + r1;
                swap[(to, from)] = c(1.0, 0.0);
            }
        }
    }
    let unitary = &h * &swap * &oracle.unitary * &h;
    Ok(BlockEncoding {
        unitary,
        signal_qubits: n,
        alpha: oracle.alpha,
        source: oracle.source.clone(),
    })
}

impl BlockEncoding {
    /// Query oracle plus assembly. `alpha` defaults to [`default_alpha`].
    pub fn encode(a: &CMatrix, alpha: Option<f64>) -> Result<Self, QBlockError> {
        let alpha = alpha.unwrap_or_else(|| default_alpha(a));
        assemble_ua(&query_oracle(a, alpha)?)
    }

    pub fn dim(&self) -> usize {
        1 << self.signal_qubits
    }

    /// The rotation ancilla plus the `r1` register.
    pub fn ancilla_qubits(&self) -> usize {
        1 + self.signal_qubits
    }

    /// Top-left `N x N` block, `alpha * A / N`.
    pub fn block(&self) -> CMatrix {
        let d = self.dim();
        self.unitary.view((0, 0), (d, d)).into_owned()
    }

    /// Runs `|0>|0>|s>` through `U` and keeps the part with every ancilla at zero.
    pub fn apply_postselected(&self, s: &CVector) -> CVector {
        let d = self.dim();
        let mut full = CVector::zeros(self.unitary.nrows());
        full.rows_mut(0, d).copy_from(s);
        let out = &self.unitary * full;
        out.rows(0, d).into_owned()
    }

    /// Post-selected block obtained by simulating every signal basis input.
    pub fn postselected_block(&self) -> CMatrix {
        let d = self.dim();
        let cols: Vec<CVector> = (0..d)
            .map(|j| {
                let mut e = CVector::zeros(d);
                e[j] = c(1.0, 0.0);
                self.apply_postselected(&e)
            })
            .collect();
        CMatrix::from_columns(&cols)
    }

    /// `max |(U^H U - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.unitary.nrows();
        let g = self.unitary.adjoint() * &self.unitary - CMatrix::identity(n, n);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(phi| A |phi)` recovered from the block, undoing `alpha / N`.
    pub fn expectation(&self, phi: &CVector) -> C64 {
        let b = self.block();
        phi.dotc(&(b * phi)) / phi.dotc(phi) * (self.dim() as f64 / self.alpha)
    }
}
