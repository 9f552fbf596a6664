//! Integral quantization on finite measure spaces, with the classical side
//! it quantizes: linear symplectic geometry, Poisson brackets and
//! structure-preserving time evolution.
//!
//! * [`hilbert`]: kets, operators, traces, Hermitian eigensolver
//! * [`frames`]: measure spaces, operator frames, resolution of the identity
//! * [`quantizer`]: `f -> A_f`, lower symbols, spectra
//! * [`symplectic`]: forms, complements, subspace classes, Darboux frames
//! * [`hamiltonian`]: brackets, Hamiltonian vector fields, integrators
//! * [`grid`]: canonical `q`, `p` on a finite grid

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod frames;
pub mod grid;
pub mod hamiltonian;
pub mod hilbert;
pub mod quantizer;
pub mod symplectic;

pub use error::{Error, Result};
pub use hilbert::{Ket, Operator, C64};

/// Default numerical thresholds, all absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Density checks on frame operators and states.
    pub density: f64,
    /// Gram-matrix defect allowed for coherent-state function families.
    pub orthonormality: f64,
    /// Frame residual above which quantization warns.
    pub resolution_warn: f64,
    /// Frame residual above which quantization refuses.
    pub resolution_reject: f64,
    /// Hermiticity defect for frame operators.
    pub hermitian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            density: 1e-10,
            orthonormality: 1e-10,
            resolution_warn: 1e-10,
            resolution_reject: 1e-8,
            hermitian: 1e-12,
        }
    }
}

impl Tolerances {
    /// Every threshold multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            density: self.density * factor,
            orthonormality: self.orthonormality * factor,
            resolution_warn: self.resolution_warn * factor,
            resolution_reject: self.resolution_reject * factor,
            hermitian: self.hermitian * factor,
        }
    }
}
