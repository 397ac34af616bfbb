//! Seeded samplers for random operators, unitaries and states.
//!
//! Every suite draws case `k` from `stream_rng(seed, k)`, so results do not
//! depend on how cases are split across threads.

use crate::qcore::{CMatrix, CVector, HermitianOperator, QuantumState, UnitaryOperator};
use crate::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for case `stream` of a run seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng))
}

/// GUE-style Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let g = ginibre(dim, rng);
    HermitianOperator::hermitian_part(&g).expect("Hermitian part of a finite matrix")
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOperator {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    UnitaryOperator::new(q).expect("QR factor is unitary")
}

/// Uniformly random unit vector.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> QuantumState {
    let v = CVector::from_fn(dim, |_, _| gaussian_complex(rng));
    QuantumState::pure_normalized(v).expect("Gaussian vector is non-zero")
}

/// Random full-rank density matrix `G G† / Tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<QuantumState> {
    let g = ginibre(dim, rng);
    let rho = &g * g.adjoint();
    let trace = rho.trace().re;
    let rho = HermitianOperator::hermitian_part(&rho.unscale(trace))?;
    QuantumState::mixed(rho.into_matrix())
}
