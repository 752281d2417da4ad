//! Gray-code circuits for the query oracle.
//!
//! The oracle is a uniformly controlled rotation of the ancilla (qubit 0)
//! controlled by `r1` (qubits `1..=n`) and `r2` (qubits `n+1..=2n`), most
//! significant qubit first. Its angles are Walsh-Hadamard transformed and
//! emitted in Gray-code order, each rotation followed by a CNOT from the bit
//! that changes next. Small angles are pruned and the CNOTs left adjacent by
//! pruning are cancelled in pairs.

use serde::Serialize;

use crate::linalg::{c, CMatrix, C64};

use super::encoding::{default_alpha, max_entry, signal_qubits};
use super::QBlockError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gate {
    pub gate: String,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl Gate {
    fn new(gate: &str, targets: Vec<usize>, controls: Vec<usize>, angle: Option<f64>) -> Self {
        Gate {
            gate: gate.into(),
            targets,
            controls,
            angle,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FableCircuit {
    pub num_qubits: usize,
    pub signal_qubits: usize,
    pub alpha: f64,
    pub prune_tol: f64,
    pub rotations_naive: usize,
    pub rotations: usize,
    pub cnots_naive: usize,
    pub cnots: usize,
    pub gates: Vec<Gate>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// `phi_i = 2^-k sum_l (-1)^{popcount(l & gray(i))} theta_l`.
fn gray_walsh(theta: &[f64]) -> Vec<f64> {
    let len = theta.len();
    // fast Walsh-Hadamard in natural order, then read out in Gray order
    let mut w = theta.to_vec();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (w[i], w[i + h]);
                w[i] = a + b;
                w[i + h] = a - b;
            }
        }
        h *= 2;
    }
    (0..len).map(|i| w[gray(i)] / len as f64).collect()
}

/// Uniformly controlled `kind` rotation on qubit 0. Returns the gates and the
/// naive rotation count.
fn uniformly_controlled(kind: &str, theta: &[f64], n: usize, tol: f64) -> (Vec<Gate>, usize) {
    let k = 2 * n;
    let len = theta.len();
    debug_assert_eq!(len, 1 << k);
    if k == 0 {
        let g = if theta[0].abs() > tol {
            vec![Gate::new(kind, vec![0], vec![], Some(theta[0]))]
        } else {
            Vec::new()
        };
        return (g, 1);
    }
    let phi = gray_walsh(theta);
    let qubit_of_bit = |b: usize| 2 * n - b;
    let mut gates = Vec::new();
    // parity of pending CNOT controls since the last kept rotation
    let mut pending = vec![false; k];
    let flush = |pending: &mut Vec<bool>, gates: &mut Vec<Gate>| {
        for b in (0..k).rev() {
            if pending[b] {
                gates.push(Gate::new("CNOT", vec![0], vec![qubit_of_bit(b)], None));
                pending[b] = false;
            }
        }
    };
    for (i, &angle) in phi.iter().enumerate() {
        if angle.abs() > tol {
            flush(&mut pending, &mut gates);
            gates.push(Gate::new(kind, vec![0], vec![], Some(angle)));
        }
        let changed = gray(i) ^ gray((i + 1) % len);
        let b = changed.trailing_zeros() as usize;
        pending[b] = !pending[b];
    }
    flush(&mut pending, &mut gates);
    (gates, len)
}

/// Gray-code circuit for the block encoding of `a`, scaled by [`default_alpha`].
pub fn fable_compress(a: &CMatrix, prune_tol: f64) -> Result<FableCircuit, QBlockError> {
    if a.nrows() != a.ncols() {
        return Err(QBlockError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = signal_qubits(a.nrows())?;
    let dim = a.nrows();
    let alpha = default_alpha(a);
    debug_assert!(alpha * max_entry(a) <= 1.0 + 1e-12);
    let is_real = a.iter().all(|z| z.im == 0.0);

    let entries: Vec<C64> = (0..dim * dim).map(|l| a[(l / dim, l % dim)] * alpha).collect();
    let mut gates = Vec::new();
    for q in 1..=n {
        gates.push(Gate::new("H", vec![q], vec![], None));
    }
    let mut rotations_naive = 0;
    let mut oracle = Vec::new();
    if is_real {
        let theta: Vec<f64> = entries.iter().map(|v| 2.0 * v.re.clamp(-1.0, 1.0).acos()).collect();
        let (g, naive) = uniformly_controlled("RY", &theta, n, prune_tol);
        oracle.extend(g);
        rotations_naive += naive;
    } else {
        // [[a, -s], [s, conj a]] = Rz(-arg a) Ry(2 arccos|a|) Rz(-arg a)
        let theta: Vec<f64> = entries.iter().map(|v| 2.0 * v.norm().min(1.0).acos()).collect();
        let phase: Vec<f64> = entries.iter().map(|v| -v.arg()).collect();
        for (kind, angles) in [("RZ", &phase), ("RY", &theta), ("RZ", &phase)] {
            let (g, naive) = uniformly_controlled(kind, angles, n, prune_tol);
            oracle.extend(g);
            rotations_naive += naive;
        }
    }
    gates.extend(oracle);
    for q in 1..=n {
        gates.push(Gate::new("SWAP", vec![q, n + q], vec![], None));
    }
    for q in 1..=n {
        gates.push(Gate::new("H", vec![q], vec![], None));
    }
    let rotations = gates.iter().filter(|g| g.gate == "RY" || g.gate == "RZ").count();
    let cnots = gates.iter().filter(|g| g.gate == "CNOT").count();
    Ok(FableCircuit {
        num_qubits: 2 * n + 1,
        signal_qubits: n,
        alpha,
        prune_tol,
        rotations_naive,
        rotations,
        cnots_naive: if n == 0 { 0 } else { rotations_naive },
        cnots,
        gates,
    })
}

fn single_qubit_matrix(g: &Gate) -> [[C64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match g.gate.as_str() {
        "H" => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        "RY" => {
            let t = g.angle.unwrap_or(0.0) / 2.0;
            [[c(t.cos(), 0.0), c(-t.sin(), 0.0)], [c(t.sin(), 0.0), c(t.cos(), 0.0)]]
        }
        "RZ" => {
            let t = g.angle.unwrap_or(0.0) / 2.0;
            [[c(t.cos(), -t.sin()), c(0.0, 0.0)], [c(0.0, 0.0), c(t.cos(), t.sin())]]
        }
        other => panic!("not a single-qubit gate: {other}"),
    }
}

impl FableCircuit {
    /// Dense unitary of the circuit; qubit 0 is the most significant index bit.
    pub fn unitary(&self) -> CMatrix {
        let q = self.num_qubits;
        let dim = 1usize << q;
        let bit = |qubit: usize| 1usize << (q - 1 - qubit);
        let mut u = CMatrix::identity(dim, dim);
        for g in &self.gates {
            match g.gate.as_str() {
                "CNOT" => {
                    let (cb, tb) = (bit(g.controls[0]), bit(g.targets[0]));
                    for i in 0..dim {
                        if i & cb != 0 && i & tb == 0 {
                            u.swap_rows(i, i | tb);
                        }
                    }
                }
                "SWAP" => {
                    let (a, b) = (bit(g.targets[0]), bit(g.targets[1]));
                    for i in 0..dim {
                        if i & a != 0 && i & b == 0 {
                            u.swap_rows(i, (i & !a) | b);
                        }
                    }
                }
                _ => {
                    let m = single_qubit_matrix(g);
                    let tb = bit(g.targets[0]);
                    for i in 0..dim {
                        if i & tb != 0 {
                            continue;
                        }
                        let j = i | tb;
                        for col in 0..dim {
                            let (x0, x1) = (u[(i, col)], u[(j, col)]);
                            u[(i, col)] = m[0][0] * x0 + m[0][1] * x1;
                            u[(j, col)] = m[1][0] * x0 + m[1][1] * x1;
                        }
                    }
                }
            }
        }
        u
    }

    /// Top-left `N x N` block of the simulated circuit.
    pub fn block(&self) -> CMatrix {
        let d = 1usize << self.signal_qubits;
        self.unitary().view((0, 0), (d, d)).into_owned()
    }

    pub fn gates_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.gates).expect("gates serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walsh_in_gray_order_inverts() {
        let theta = [0.3, -1.2, 0.7, 2.0];
        let phi = gray_walsh(&theta);
        for (l, &t) in theta.iter().enumerate() {
            let s: f64 = (0..4)
                .map(|i| if (l & gray(i)).count_ones().is_multiple_of(2) { phi[i] } else { -phi[i] })
                .sum();
            assert!((s - t).abs() < 1e-14);
        }
    }

    #[test]
    fn single_control_circuit() {
        let (g, naive) = uniformly_controlled("RY", &[0.5, 0.5, 0.5, 0.5], 1, 1e-12);
        assert_eq!(naive, 4);
        // constant angles collapse to one rotation and no CNOTs
        assert_eq!(g.len(), 1);
    }
}
