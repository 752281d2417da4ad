//! Phase estimation on block-encoded evolution operators.
//!
//! A matrix `M` is evolved as `W = exp(-i (M - c) / r)`. An eigenvalue `lambda`
//! of `M` becomes the phase `((-(lambda - c) / r) mod 2 pi) / 2 pi` of `W`.
//! The phase register is read most significant bit first.
//!
//! Each phase qubit `k` controls the block encoding of `alpha_k W^(2^k)`; its
//! `|0>` branch gets the block encoding of `alpha_k I` so both branches carry
//! the same `alpha_k / N` and the scale disappears on renormalization. The
//! ancillas are post-selected on zero after every controlled step.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::linalg::{complexify, expm_minus_i, frobenius, CMatrix, CVector, C64};
use crate::rootfind::{eigenspaces, EigenOptions};

use super::encoding::{signal_qubits, BlockEncoding};
use super::{QBlockError, StateVector, MAX_QUBITS};

/// Affine map `M -> (M - center) / radius` applied before evolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralScaling {
    pub center: f64,
    pub radius: f64,
}

impl SpectralScaling {
    pub const IDENTITY: SpectralScaling = SpectralScaling {
        center: 0.0,
        radius: 1.0,
    };

    /// Half-width of the phase window the scaled real parts are placed in.
    pub const MARGIN: f64 = 0.75 * PI;

    pub fn new(center: f64, radius: f64) -> Self {
        assert!(radius > 0.0, "radius must be positive");
        SpectralScaling { center, radius }
    }

    /// From the Gershgorin discs: the real parts of all eigenvalues land in
    /// `[-MARGIN, MARGIN]` after scaling.
    pub fn gershgorin(m: &CMatrix) -> Self {
        let n = m.nrows();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum();
            lo = lo.min(m[(i, i)].re - r);
            hi = hi.max(m[(i, i)].re + r);
        }
        if n == 0 {
            return Self::IDENTITY;
        }
        let half = (hi - lo) / 2.0;
        let radius = if half > 0.0 { half / Self::MARGIN } else { 1.0 };
        SpectralScaling {
            center: (lo + hi) / 2.0,
            radius,
        }
    }

    pub fn scaled(&self, m: &CMatrix) -> CMatrix {
        let n = m.nrows();
        (m - CMatrix::identity(n, n) * C64::new(self.center, 0.0)) / C64::new(self.radius, 0.0)
    }

    /// Phase in `[0, 1)` that a real eigenvalue maps to.
    pub fn phase_of(&self, lambda: f64) -> f64 {
        (-(lambda - self.center) / self.radius).rem_euclid(TAU) / TAU
    }

    /// Inverse of [`phase_of`](Self::phase_of), taking the angle in `(-pi, pi]`.
    pub fn decode(&self, phase: f64) -> f64 {
        let mut t = (-phase * TAU).rem_euclid(TAU);
        if t > PI {
            t -= TAU;
        }
        self.center + self.radius * t
    }

    /// Eigenvalue resolution of a `bits`-bit register.
    pub fn resolution(&self, bits: usize) -> f64 {
        TAU * self.radius / (1u64 << bits) as f64
    }
}

/// `exp(-i M)` for a real matrix.
pub fn matrix_exp(m: &DMatrix<f64>) -> CMatrix {
    expm_minus_i(&complexify(m))
}

/// `exp(-i (M - c) / r)`.
pub fn evolution_operator(m: &CMatrix, scaling: &SpectralScaling) -> CMatrix {
    expm_minus_i(&scaling.scaled(m))
}

#[derive(Clone, Debug)]
pub struct QpeOptions {
    pub bits: usize,
    /// used only to decode phases into eigenvalues
    pub scaling: SpectralScaling,
    /// peak-pair mass below which the result is flagged complex
    pub flat_threshold: f64,
    /// the flag is only raised from this many bits on
    pub min_flag_bits: usize,
}

impl Default for QpeOptions {
    fn default() -> Self {
        QpeOptions {
            bits: 8,
            scaling: SpectralScaling::IDENTITY,
            flat_threshold: 0.5,
            min_flag_bits: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QpeOutcome {
    pub bits: String,
    pub index: usize,
    pub probability: f64,
    pub phase: f64,
    pub eigenvalue: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QpeDiagnostics {
    pub max_probability: f64,
    /// largest probability of two adjacent outcomes
    pub peak_pair_mass: f64,
    pub complex_flag: bool,
    /// per phase qubit: norm of the `|1>` branch over the `|0>` branch
    pub damping: Vec<f64>,
    /// per phase qubit: probability that the ancillas read zero
    pub postselection: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QpeResult {
    pub bits: usize,
    pub scaling: SpectralScaling,
    #[serde(skip)]
    pub probabilities: Vec<f64>,
    /// outcomes with probability at least 1e-9, most likely first
    pub outcomes: Vec<QpeOutcome>,
    pub diagnostics: QpeDiagnostics,
}

impl QpeResult {
    pub fn modal(&self) -> &QpeOutcome {
        &self.outcomes[0]
    }

    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

fn bit_string(index: usize, bits: usize) -> String {
    format!("{:0width$b}", index, width = bits)
}

fn check_capacity(bits: usize, n: usize) -> Result<(), QBlockError> {
    if bits == 0 {
        return Err(QBlockError::NoBits);
    }
    let qubits = bits + 1 + 2 * n;
    if qubits > MAX_QUBITS {
        return Err(QBlockError::Capacity {
            qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Post-selected blocks of the `|0>` and `|1>` branches for one phase qubit,
/// and their shared factor `alpha / N`.
struct StepBlocks {
    zero: CMatrix,
    one: CMatrix,
    factor: f64,
}

fn step_blocks(powers: &[CMatrix], first: Option<&BlockEncoding>) -> Result<Vec<StepBlocks>, QBlockError> {
    let mut out = Vec::with_capacity(powers.len());
    for (k, p) in powers.iter().enumerate() {
        let enc = match (k, first) {
            (0, Some(u)) => u.clone(),
            _ => BlockEncoding::encode(p, None)?,
        };
        let dim = p.nrows();
        let enc_id = BlockEncoding::encode(&CMatrix::identity(dim, dim), Some(enc.alpha))?;
        out.push(StepBlocks {
            zero: enc_id.postselected_block(),
            one: enc.postselected_block(),
            factor: enc.alpha / dim as f64,
        });
    }
    Ok(out)
}

/// `W, W^2, W^4, ...` by repeated squaring.
fn squared_powers(w: &CMatrix, bits: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(bits);
    let mut p = w.clone();
    for k in 0..bits {
        if k > 0 {
            p = &p * &p;
        }
        out.push(p.clone());
    }
    out
}

/// In-place inverse QFT over the phase index for every signal entry:
/// `out[m] = 2^(-t/2) sum_x exp(-2 pi i m x / 2^t) in[x]`.
fn inverse_qft<T: AsMut<[C64]>>(branches: &mut [T]) {
    let len = branches.len();
    let width = branches[0].as_mut().len();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let norm = 1.0 / (len as f64).sqrt();
    let mut buf = vec![C64::new(0.0, 0.0); len];
    for e in 0..width {
        for (x, b) in branches.iter_mut().enumerate() {
            buf[x] = b.as_mut()[e];
        }
        fft.process(&mut buf);
        for (m, b) in branches.iter_mut().enumerate() {
            b.as_mut()[e] = buf[m] * norm;
        }
    }
}

fn peak_pair(p: &[f64]) -> f64 {
    let l = p.len();
    if l == 1 {
        return p[0];
    }
    (0..l).map(|m| p[m] + p[(m + 1) % l]).fold(0.0, f64::max)
}

/// Phase estimation with `u` encoding the evolution operator `W` (its source
/// matrix). `psi0` lives on the signal register.
pub fn qpe_simulate(u: &BlockEncoding, psi0: &StateVector, opts: &QpeOptions) -> Result<QpeResult, QBlockError> {
    let dim = u.dim();
    if psi0.dim() != dim {
        return Err(QBlockError::DimensionMismatch {
            expected: dim,
            got: psi0.dim(),
        });
    }
    let t = opts.bits;
    check_capacity(t, u.signal_qubits)?;
    let blocks = step_blocks(&squared_powers(&u.source, t), Some(u))?;
    let len = 1usize << t;
    let start = &psi0.amplitudes / C64::new(psi0.norm() * (len as f64).sqrt(), 0.0);
    let mut psi: Vec<CVector> = vec![start; len];
    let mut damping = Vec::with_capacity(t);
    let mut postselection = Vec::with_capacity(t);
    for (k, b) in blocks.iter().enumerate() {
        let (mut m0, mut m1) = (0.0, 0.0);
        for (x, s) in psi.iter_mut().enumerate() {
            if (x >> k) & 1 == 1 {
                *s = &b.one * &*s;
                m1 += s.norm_squared();
            } else {
                *s = &b.zero * &*s;
                m0 += s.norm_squared();
            }
        }
        let total = m0 + m1;
        if total == 0.0 {
            return Err(QBlockError::ZeroState);
        }
        damping.push((m1 / m0).sqrt());
        postselection.push(total);
        let scale = C64::new(1.0 / total.sqrt(), 0.0);
        for s in psi.iter_mut() {
            *s *= scale;
        }
    }
    let mut rows: Vec<Vec<C64>> = psi.into_iter().map(|v| v.iter().copied().collect()).collect();
    inverse_qft(&mut rows);
    let probabilities: Vec<f64> = rows.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect();

    let mut outcomes: Vec<QpeOutcome> = probabilities
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= 1e-9)
        .map(|(m, &p)| {
            let phase = m as f64 / len as f64;
            QpeOutcome {
                bits: bit_string(m, t),
                index: m,
                probability: p,
                phase,
                eigenvalue: opts.scaling.decode(phase),
            }
        })
        .collect();
    outcomes.sort_by(|a, b| b.probability.total_cmp(&a.probability).then(a.index.cmp(&b.index)));
    let max_probability = probabilities.iter().copied().fold(0.0, f64::max);
    let peak_pair_mass = peak_pair(&probabilities);
    Ok(QpeResult {
        bits: t,
        scaling: opts.scaling,
        outcomes,
        diagnostics: QpeDiagnostics {
            max_probability,
            peak_pair_mass,
            complex_flag: t >= opts.min_flag_bits && peak_pair_mass < opts.flat_threshold,
            damping,
            postselection,
        },
        probabilities,
    })
}

#[derive(Clone, Debug)]
pub struct MultiQpeOptions {
    pub bits: usize,
    /// one per matrix; default [`SpectralScaling::gershgorin`]
    pub scalings: Option<Vec<SpectralScaling>>,
    pub labels: Option<Vec<String>>,
    /// Replace `W^(2^k)` by `W^(2^k) P`, with `P` the spectral projector onto
    /// the real-eigenvalue invariant subspace, computed in restricted form.
    /// Equal on states inside that subspace; keeps rounding errors from being
    /// amplified by the growth of complex-eigenvalue components.
    pub real_guard: bool,
    /// windows lighter than this fraction of the input weight are pruned
    pub min_probability: f64,
    pub concentration_threshold: f64,
    pub min_flag_bits: usize,
}

impl Default for MultiQpeOptions {
    fn default() -> Self {
        MultiQpeOptions {
            bits: 8,
            scalings: None,
            labels: None,
            real_guard: false,
            min_probability: 1e-3,
            concentration_threshold: 0.5,
            min_flag_bits: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegisterReading {
    pub label: String,
    pub bits: String,
    pub index: usize,
    pub phase: f64,
    pub eigenvalue: f64,
    /// window probability within its branch
    pub probability: f64,
    /// peak-pair mass over window mass
    pub concentration: f64,
    pub discard: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JointOutcome {
    pub probability: f64,
    pub readings: Vec<RegisterReading>,
    pub discard: bool,
}

impl JointOutcome {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.readings.iter().map(|r| r.eigenvalue).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiQpeResult {
    pub bits: usize,
    pub labels: Vec<String>,
    pub scalings: Vec<SpectralScaling>,
    pub real_guard: bool,
    /// most likely first
    pub outcomes: Vec<JointOutcome>,
    pub pruned_probability: f64,
}

impl MultiQpeResult {
    pub fn kept(&self) -> impl Iterator<Item = &JointOutcome> {
        self.outcomes.iter().filter(|o| !o.discard)
    }
}

/// `W^(2^k) P` for `k < bits`, `P` the spectral projector onto the
/// real-eigenvalue invariant subspace of `a`.
fn guarded_powers(a: &CMatrix, bits: usize) -> Result<Vec<CMatrix>, QBlockError> {
    let opts = EigenOptions::default();
    let spaces = eigenspaces(a, &opts)?;
    let scale = 1.0 + spaces.iter().map(|s| s.value.norm()).fold(0.0, f64::max);
    let is_real = |v: C64| v.im.abs() <= opts.cluster_tol * scale;
    let real: Vec<CVector> = spaces
        .iter()
        .filter(|s| is_real(s.value))
        .flat_map(|s| s.basis.column_iter().map(|c| c.into_owned()))
        .collect();
    let other: Vec<CVector> = spaces
        .iter()
        .filter(|s| !is_real(s.value))
        .flat_map(|s| s.basis.column_iter().map(|c| c.into_owned()))
        .collect();
    let n = a.nrows();
    if other.is_empty() {
        return Ok(squared_powers(&expm_minus_i(a), bits));
    }
    if real.is_empty() {
        return Ok(vec![CMatrix::zeros(n, n); bits]);
    }
    let k = real.len();
    let all: Vec<CVector> = real.iter().chain(other.iter()).cloned().collect();
    let s = CMatrix::from_columns(&all);
    let s_inv = s.try_inverse().ok_or(QBlockError::SingularProjector)?;
    let v = CMatrix::from_columns(&real);
    let y = s_inv.rows(0, k).into_owned();
    let restricted = &y * a * &v;
    Ok((0..bits)
        .map(|j| {
            let e = expm_minus_i(&(&restricted * C64::new((1u64 << j) as f64, 0.0)));
            &v * e * &y
        })
        .collect())
}

/// Kraus operators `K_m = 2^-t sum_x exp(-2 pi i m x / 2^t) W^x`, obtained by
/// simulating the controlled steps on every signal basis state and undoing
/// the known `alpha / N` factors.
fn kraus_operators(powers: &[CMatrix]) -> Result<Vec<CMatrix>, QBlockError> {
    let blocks = step_blocks(powers, None)?;
    let dim = powers[0].nrows();
    let len = 1usize << powers.len();
    let start = CMatrix::identity(dim, dim) / C64::new((len as f64).sqrt(), 0.0);
    let mut psi: Vec<CMatrix> = vec![start; len];
    for (k, b) in blocks.iter().enumerate() {
        let f = C64::new(1.0 / b.factor, 0.0);
        for (x, s) in psi.iter_mut().enumerate() {
            let blk = if (x >> k) & 1 == 1 { &b.one } else { &b.zero };
            *s = blk * &*s * f;
        }
    }
    let mut flat: Vec<Vec<C64>> = psi.iter().map(|m| m.iter().copied().collect()).collect();
    inverse_qft(&mut flat);
    let norm = C64::new(1.0 / (len as f64).sqrt(), 0.0);
    Ok(flat
        .into_iter()
        .map(|v| CMatrix::from_column_slice(dim, dim, &v) * norm)
        .collect())
}

struct Window {
    peak: usize,
    members: Vec<usize>,
}

fn circular_distance(a: usize, b: usize, len: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(len - d)
}

/// Splits a circular distribution into one window per significant peak.
///
/// A local maximum becomes a peak only if it clears twice the side-lobe
/// envelope of the peaks already accepted; window borders sit at the lowest
/// point between neighboring peaks.
fn find_windows(p: &[f64], min_rel: f64) -> Vec<Window> {
    let len = p.len();
    let total: f64 = p.iter().sum();
    if len == 1 || total <= 0.0 {
        return vec![Window {
            peak: 0,
            members: (0..len).collect(),
        }];
    }
    let mut cands: Vec<usize> = (0..len)
        .filter(|&m| p[m] > 0.0 && p[m] >= p[(m + len - 1) % len] && p[m] >= p[(m + 1) % len])
        .collect();
    cands.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    let mut peaks: Vec<usize> = Vec::new();
    for &m in &cands {
        if p[m] < min_rel * total {
            break;
        }
        let envelope: f64 = peaks
            .iter()
            .map(|&q| {
                let d = circular_distance(m, q, len) as f64 - 0.5;
                0.617 * p[q] / d.max(0.5).powi(2)
            })
            .sum();
        if p[m] > 2.0 * envelope {
            peaks.push(m);
        }
    }
    if peaks.is_empty() {
        let top = (0..len).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0);
        peaks.push(top);
    }
    peaks.sort_unstable();
    if peaks.len() == 1 {
        return vec![Window {
            peak: peaks[0],
            members: (0..len).collect(),
        }];
    }
    let mut windows: Vec<Window> = peaks
        .iter()
        .map(|&q| Window {
            peak: q,
            members: vec![q],
        })
        .collect();
    let count = peaks.len();
    for i in 0..count {
        let (a, b) = (peaks[i], peaks[(i + 1) % count]);
        let gap = (b + len - a) % len;
        let between: Vec<usize> = (1..gap).map(|s| (a + s) % len).collect();
        if between.is_empty() {
            continue;
        }
        let cut = between
            .iter()
            .enumerate()
            .min_by(|x, y| p[*x.1].total_cmp(&p[*y.1]).then(x.0.cmp(&y.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        windows[i].members.extend(&between[..=cut]);
        windows[(i + 1) % count].members.extend(&between[cut + 1..]);
    }
    windows
}

fn sandwich(k: &CMatrix, rho: &CMatrix) -> CMatrix {
    k * rho * k.adjoint()
}

struct MultiCtx<'a> {
    kraus: &'a [Vec<CMatrix>],
    scalings: &'a [SpectralScaling],
    labels: &'a [String],
    opts: &'a MultiQpeOptions,
    leaves: Vec<(f64, Vec<RegisterReading>, bool)>,
    pruned: f64,
}

impl MultiCtx<'_> {
    /// `share` is the fraction of the input weight that reaches this branch.
    fn descend(&mut self, r: usize, rho: &CMatrix, share: f64, readings: Vec<RegisterReading>) {
        let ks = &self.kraus[r];
        let len = ks.len();
        let t = self.opts.bits;
        let branch: Vec<CMatrix> = ks.iter().map(|k| sandwich(k, rho)).collect();
        let p: Vec<f64> = branch.iter().map(|b| b.trace().re.max(0.0)).collect();
        let total: f64 = p.iter().sum();
        if total <= 0.0 {
            return;
        }
        for w in find_windows(&p, self.opts.min_probability) {
            let mass: f64 = w.members.iter().map(|&m| p[m]).sum();
            let global = share * mass / total;
            if global < self.opts.min_probability {
                self.pruned += global;
                continue;
            }
            let modal = w.members.iter().copied().max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(w.peak);
            let neighbor = [(modal + len - 1) % len, (modal + 1) % len]
                .into_iter()
                .filter(|m| len > 1 && w.members.contains(m))
                .map(|m| p[m])
                .fold(0.0, f64::max);
            let concentration = (p[modal] + neighbor) / mass;
            let discard = t >= self.opts.min_flag_bits && concentration < self.opts.concentration_threshold;
            let phase = modal as f64 / len as f64;
            let mut next = readings.clone();
            next.push(RegisterReading {
                label: self.labels[r].clone(),
                bits: bit_string(modal, t),
                index: modal,
                phase,
                eigenvalue: self.scalings[r].decode(phase),
                probability: mass / total,
                concentration,
                discard,
            });
            if discard || r + 1 == self.kraus.len() {
                self.leaves.push((global, next, discard));
            } else {
                let n = rho.nrows();
                let rho_w = w.members.iter().fold(CMatrix::zeros(n, n), |acc, &m| acc + &branch[m]);
                self.descend(r + 1, &rho_w, global, next);
            }
        }
    }
}

/// Successive phase estimation with one register per matrix.
///
/// The signal state is carried as an unnormalized density matrix per branch.
/// Outcomes of each register are grouped into windows around significant
/// peaks, which is exact for all later statistics by linearity. Windows whose
/// mass is not concentrated around the peak are reported with `discard` set
/// and not refined further.
pub fn multi_qpe(ms: &[CMatrix], psi0: &StateVector, opts: &MultiQpeOptions) -> Result<MultiQpeResult, QBlockError> {
    let Some(first) = ms.first() else {
        return Ok(MultiQpeResult {
            bits: opts.bits,
            labels: Vec::new(),
            scalings: Vec::new(),
            real_guard: opts.real_guard,
            outcomes: Vec::new(),
            pruned_probability: 0.0,
        });
    };
    let dim = first.nrows();
    let n = signal_qubits(dim)?;
    check_capacity(opts.bits, n)?;
    for m in ms {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(QBlockError::DimensionMismatch {
                expected: dim,
                got: m.nrows(),
            });
        }
    }
    if psi0.dim() != dim {
        return Err(QBlockError::DimensionMismatch {
            expected: dim,
            got: psi0.dim(),
        });
    }
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let d = frobenius(&(&ms[i] * &ms[j] - &ms[j] * &ms[i]));
            if d > 1e-9 * (1.0 + frobenius(&ms[i]) * frobenius(&ms[j])) {
                return Err(QBlockError::NotCommuting(i, j));
            }
        }
    }
    let scalings: Vec<SpectralScaling> = match &opts.scalings {
        Some(s) => {
            if s.len() != ms.len() {
                return Err(QBlockError::DimensionMismatch {
                    expected: ms.len(),
                    got: s.len(),
                });
            }
            s.clone()
        }
        None => ms.iter().map(SpectralScaling::gershgorin).collect(),
    };
    let labels: Vec<String> = match &opts.labels {
        Some(l) => l.clone(),
        None => (0..ms.len()).map(|i| format!("m{i}")).collect(),
    };
    let mut kraus = Vec::with_capacity(ms.len());
    for (m, s) in ms.iter().zip(&scalings) {
        let a = s.scaled(m);
        let powers = if opts.real_guard {
            guarded_powers(&a, opts.bits)?
        } else {
            squared_powers(&expm_minus_i(&a), opts.bits)
        };
        kraus.push(kraus_operators(&powers)?);
    }
    let psi = &psi0.amplitudes / C64::new(psi0.norm(), 0.0);
    let rho = &psi * psi.adjoint();
    let mut ctx = MultiCtx {
        kraus: &kraus,
        scalings: &scalings,
        labels: &labels,
        opts,
        leaves: Vec::new(),
        pruned: 0.0,
    };
    ctx.descend(0, &rho, 1.0, Vec::new());
    let MultiCtx { leaves, pruned, .. } = ctx;
    let total: f64 = leaves.iter().map(|l| l.0).sum::<f64>() + pruned;
    let mut outcomes: Vec<JointOutcome> = leaves
        .into_iter()
        .map(|(w, readings, discard)| JointOutcome {
            probability: if total > 0.0 { w / total } else { 0.0 },
            readings,
            discard,
        })
        .collect();
    outcomes.sort_by(|a, b| b.probability.total_cmp(&a.probability));
    Ok(MultiQpeResult {
        bits: opts.bits,
        labels,
        scalings,
        real_guard: opts.real_guard,
        outcomes,
        pruned_probability: if total > 0.0 { pruned / total } else { 0.0 },
    })
}
