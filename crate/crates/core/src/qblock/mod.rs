//! Statevector simulation of block encodings, phase estimation and the
//! inverse-power filter.
//!
//! Qubit layout for a block encoding of an `N x N` matrix with `N = 2^n`:
//! one rotation ancilla (most significant), an `n`-qubit register `r1`, and the
//! `n`-qubit signal register `r2`. Basis index = `anc * N^2 + r1 * N + r2`.

mod encoding;
mod fable;
mod filter;
mod qpe;
mod state;

use thiserror::Error;

pub use encoding::{assemble_ua, default_alpha, query_oracle, signal_qubits, BlockEncoding, QueryOracle};
pub use fable::{fable_compress, FableCircuit, Gate};
pub use filter::{inverse_power_filter, FilterOptions, FilterSample};
pub use qpe::{
    evolution_operator, matrix_exp, multi_qpe, qpe_simulate, JointOutcome, MultiQpeOptions, MultiQpeResult,
    QpeDiagnostics, QpeOptions, QpeOutcome, QpeResult, RegisterReading, SpectralScaling,
};
pub use state::StateVector;

use crate::linalg::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QBlockError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("scale {alpha} is out of range for max entry {max_entry}")]
    AlphaOutOfRange { alpha: f64, max_entry: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{qubits} qubits exceed the simulator limit of {limit}")]
    Capacity { qubits: usize, limit: usize },
    #[error("shift {shift} is singular or nearly so (condition number {condition:e})")]
    SingularShift { shift: C64, condition: f64 },
    #[error("matrices {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("eigenvector basis is singular; no spectral projector")]
    SingularProjector,
    #[error("need at least one phase bit")]
    NoBits,
    #[error("zero state vector")]
    ZeroState,
    #[error(transparent)]
    Eigen(#[from] crate::rootfind::RootError),
}

/// Largest state the simulator will hold, in qubits.
pub const MAX_QUBITS: usize = 24;
