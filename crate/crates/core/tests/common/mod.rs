#![allow(dead_code)]

use std::sync::OnceLock;

use gbqpe::groebner::{buchberger, GroebnerBasis, GroebnerLimits};
use gbqpe::hf_builder::{build_hf_ideal, build_toy_ideal, ObjectiveSpec, ToyModelSpec};
use gbqpe::linalg::{complexify, CMatrix};
use gbqpe::polyring::Rational;
use gbqpe::quotient::MultMatrixSet;

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Real roots of the HeH+ system as (x, y, e).
pub const HEH_REAL_ROOTS: [[f64; 3]; 4] = [
    [0.604062, -1.114772, -0.537546],
    [-0.604062, 1.114772, -0.537546],
    [-0.801308, -0.337484, -1.600455],
    [0.801308, 0.337484, -1.600455],
];

pub fn toy_gb() -> GroebnerBasis {
    buchberger(&build_toy_ideal(&ToyModelSpec::default()).unwrap(), GroebnerLimits::default()).unwrap()
}

pub fn toy_set() -> MultMatrixSet {
    MultMatrixSet::new(&toy_gb()).unwrap()
}

pub fn heh_spec() -> ObjectiveSpec {
    ObjectiveSpec::heh_plus().with_fixed_r(Rational::new(146.into(), 100.into()))
}

pub fn heh_gb() -> GroebnerBasis {
    static GB: OnceLock<GroebnerBasis> = OnceLock::new();
    GB.get_or_init(|| buchberger(&build_hf_ideal(&heh_spec()).unwrap(), GroebnerLimits::default()).unwrap())
        .clone()
}

pub fn heh_set() -> MultMatrixSet {
    MultMatrixSet::new(&heh_gb()).unwrap()
}

/// Transposed multiplication matrices in variable order, as complex matrices.
pub fn transposes(set: &MultMatrixSet) -> Vec<CMatrix> {
    set.transposes_f64().iter().map(complexify).collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
