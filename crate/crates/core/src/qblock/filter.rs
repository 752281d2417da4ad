//! Inverse power iteration through the doubled Hermitian system
//! `[[0, B], [B^H, 0]] [y; x] = [x_prev; 0]` with `B = A - shift I`.
//! Its solution is `y = 0`, `x = B^-1 x_prev`.

use serde::Serialize;

use crate::linalg::{frobenius, CMatrix, CVector, C64};

use super::QBlockError;

#[derive(Clone, Debug)]
pub struct FilterOptions {
    pub iterations: usize,
    /// converged when `||A x - rho x|| <= tol * ||A||_F`, `rho` the Rayleigh quotient
    pub tol: f64,
    /// retry shift offset, relative to `1 + |shift|`
    pub retry_delta: f64,
    pub max_retries: usize,
    /// condition numbers above this count as singular
    pub max_condition: f64,
    /// keep every normalized iterate
    pub keep_iterates: bool,
}

impl Default for FilterOptions {
    fn default() -> Self {
        FilterOptions {
            iterations: 20,
            tol: 1e-8,
            retry_delta: 0.1,
            max_retries: 3,
            max_condition: 1e12,
            keep_iterates: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterSample {
    pub requested_shift: [f64; 2],
    pub shift: [f64; 2],
    /// normalized filtered vector
    #[serde(skip)]
    pub state: CVector,
    #[serde(skip)]
    pub iterates: Vec<CVector>,
    pub condition_number: f64,
    pub rayleigh: [f64; 2],
    pub residual: f64,
    pub converged: bool,
    pub retries: usize,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

struct Attempt {
    state: CVector,
    iterates: Vec<CVector>,
    condition: f64,
    rayleigh: C64,
    residual: f64,
}

fn attempt(a: &CMatrix, shift: C64, psi0: &CVector, opts: &FilterOptions) -> Option<Attempt> {
    let n = a.nrows();
    let b = a - CMatrix::identity(n, n) * shift;
    let mut h = CMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, n), (n, n)).copy_from(&b);
    h.view_mut((n, 0), (n, n)).copy_from(&b.adjoint());
    let sv = h.clone().singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition.is_nan() || condition > opts.max_condition {
        return Some(Attempt {
            state: psi0.clone(),
            iterates: Vec::new(),
            condition,
            rayleigh: C64::new(f64::NAN, f64::NAN),
            residual: f64::INFINITY,
        });
    }
    let lu = h.lu();
    let mut x = psi0 / C64::new(psi0.norm(), 0.0);
    let mut iterates = Vec::new();
    for _ in 0..opts.iterations {
        let mut rhs = CVector::zeros(2 * n);
        rhs.rows_mut(0, n).copy_from(&x);
        let sol = lu.solve(&rhs)?;
        let next = sol.rows(n, n).into_owned();
        x = &next / C64::new(next.norm(), 0.0);
        if opts.keep_iterates {
            iterates.push(x.clone());
        }
    }
    let ax = a * &x;
    let rayleigh = x.dotc(&ax);
    let residual = (ax - &x * rayleigh).norm() / frobenius(a).max(f64::MIN_POSITIVE);
    Some(Attempt {
        state: x,
        iterates,
        condition,
        rayleigh,
        residual,
    })
}

/// One filtered vector per shift. A shift that is singular or does not
/// converge is retried at `shift + k delta`, `k = 1..=max_retries`; the
/// attempt with the smallest residual is reported.
///
/// This is a classical dense solve, so `a` may have any dimension.
pub fn inverse_power_filter(
    a: &CMatrix,
    shifts: &[C64],
    psi0: &CVector,
    opts: &FilterOptions,
) -> Result<Vec<FilterSample>, QBlockError> {
    if a.nrows() != a.ncols() {
        return Err(QBlockError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if psi0.len() != a.nrows() {
        return Err(QBlockError::DimensionMismatch {
            expected: a.nrows(),
            got: psi0.len(),
        });
    }
    if psi0.norm() == 0.0 {
        return Err(QBlockError::ZeroState);
    }
    let mut out = Vec::with_capacity(shifts.len());
    for &requested in shifts {
        let delta = opts.retry_delta * (1.0 + requested.norm());
        let mut best: Option<(Attempt, C64, usize)> = None;
        for k in 0..=opts.max_retries {
            let shift = requested + C64::new(k as f64 * delta, 0.0);
            let Some(att) = attempt(a, shift, psi0, opts) else {
                continue;
            };
            let ok = att.residual <= opts.tol;
            let better = match &best {
                None => true,
                Some((b, _, _)) => att.residual < b.residual || (b.residual.is_infinite() && att.condition < b.condition),
            };
            if better {
                best = Some((att, shift, k));
            }
            if ok {
                break;
            }
        }
        let (att, shift, retries) = best.expect("at least one attempt");
        if att.condition.is_nan() || att.condition > opts.max_condition {
            return Err(QBlockError::SingularShift {
                shift: requested,
                condition: att.condition,
            });
        }
        out.push(FilterSample {
            requested_shift: pair(requested),
            shift: pair(shift),
            state: att.state,
            iterates: att.iterates,
            condition_number: att.condition,
            rayleigh: pair(att.rayleigh),
            residual: att.residual,
            converged: att.residual <= opts.tol,
            retries,
        });
    }
    Ok(out)
}
