use serde::Serialize;

use crate::linalg::{CVector, C64};

use super::QBlockError;

#[derive(Clone, Debug, Serialize)]
pub struct Register {
    pub name: String,
    pub qubits: usize,
}

/// Amplitudes plus a register layout, most significant register first.
#[derive(Clone, Debug)]
pub struct StateVector {
    pub amplitudes: CVector,
    pub registers: Vec<Register>,
    /// false for tagged intermediates such as post-selected branches
    pub normalized: bool,
}

impl StateVector {
    /// Normalized state on a single `signal` register.
    pub fn signal(amplitudes: CVector) -> Result<Self, QBlockError> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(QBlockError::ZeroState);
        }
        let dim = amplitudes.len();
        let qubits = super::signal_qubits(dim)?;
        Ok(StateVector {
            amplitudes: amplitudes / C64::new(norm, 0.0),
            registers: vec![Register {
                name: "signal".into(),
                qubits,
            }],
            normalized: true,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self, QBlockError> {
        Self::signal(CVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `|<v|self>|^2 / (|v|^2 |self|^2)`.
    pub fn overlap(&self, v: &CVector) -> f64 {
        let d = v.dotc(&self.amplitudes).norm_sqr();
        d / (v.norm_squared() * self.amplitudes.norm_squared())
    }
}
