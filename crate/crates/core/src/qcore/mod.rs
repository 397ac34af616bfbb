//! Finite-dimensional complex linear algebra with quantum semantics.
//!
//! Operators are dense row-major complex matrices validated at construction:
//! [`HermitianOperator`] for observables, [`UnitaryOperator`] for interactions
//! and gates, [`QuantumState`] for pure vectors and density matrices. All
//! angular momenta are in units of ħ (ħ = 1) and spin components follow
//! `S_i = σ_i / 2` with `|0⟩` the `+z` eigenstate.

mod json;
mod linalg;
mod operator;
mod spin;
mod state;

pub use json::{MatrixRepr, StateRepr};
pub use linalg::{
    commutator, eigendecompose, frobenius_norm, kron, matrix_exp_i, tensor_with_cap, AsMatrix,
    Spectrum, Tensor,
};
pub use operator::{HermitianOperator, UnitaryOperator};
pub use spin::{spin_component, spin_state, Axis};
pub use state::{expectation, expectation_of, mean_square, std_dev, variance, QuantumState};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest total Hilbert-space dimension any construction may produce.
pub const DIM_CAP: usize = 4096;

/// Per-element Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Frobenius tolerance on `U†U − 1`.
pub const UNITARY_TOL: f64 = 1e-9;
/// Norm and trace tolerance for states.
pub const STATE_TOL: f64 = 1e-10;
/// Imaginary residue above which an expectation value is rejected.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;
/// Negative variances down to this value are clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn check_dim(dim: usize, cap: usize) -> crate::Result<()> {
    if dim > cap {
        Err(crate::Error::Resource {
            requested: dim,
            cap,
        })
    } else {
        Ok(())
    }
}

/// Clamp a squared quantity that should be non-negative.
pub(crate) fn clamp_nonnegative(value: f64, what: &str) -> crate::Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -VARIANCE_CLAMP {
        Ok(0.0)
    } else {
        Err(crate::Error::NumericalHealth(format!(
            "{what} is negative: {value:e}"
        )))
    }
}
