use super::{
    clamp_nonnegative, eigendecompose, AsMatrix, CMatrix, CVector, HermitianOperator,
    IMAG_RESIDUE_TOL, ONE, STATE_TOL, ZERO,
};
use crate::{Error, Result};
use num_complex::Complex64;

/// A pure state vector or a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(CVector),
    Mixed(CMatrix),
}

impl QuantumState {
    /// Validated unit vector.
    pub fn pure(v: CVector) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::contract("empty state vector"));
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::contract("state vector has non-finite entries"));
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::contract(format!(
                "state vector norm {norm} is not 1"
            )));
        }
        Ok(QuantumState::Pure(v))
    }

    /// Normalizes `v` first; fails on the zero vector.
    pub fn pure_normalized(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::contract(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Self::pure(v.unscale(norm))
    }

    /// Validated density matrix: Hermitian, PSD to −1e-10, unit trace.
    pub fn mixed(rho: CMatrix) -> Result<Self> {
        let herm = HermitianOperator::new(rho)?;
        let trace = herm.matrix().trace();
        if (trace.re - 1.0).abs() > STATE_TOL {
            return Err(Error::contract(format!(
                "density matrix trace {} is not 1",
                trace.re
            )));
        }
        let spectrum = eigendecompose(&herm)?;
        let lowest = spectrum.values[0];
        if lowest < -STATE_TOL {
            return Err(Error::contract(format!(
                "density matrix has negative eigenvalue {lowest:e}"
            )));
        }
        Ok(QuantumState::Mixed(herm.into_matrix()))
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::contract(format!(
                "basis index {k} out of range {dim}"
            )));
        }
        let mut v = CVector::from_element(dim, ZERO);
        v[k] = ONE;
        Ok(QuantumState::Pure(v))
    }

    /// Diagonal density matrix `Σ p_k |k⟩⟨k|`.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let dim = weights.len();
        let mut rho = CMatrix::zeros(dim, dim);
        for (k, &w) in weights.iter().enumerate() {
            rho[(k, k)] = Complex64::new(w, 0.0);
        }
        Self::mixed(rho)
    }

    /// `p·s1 + (1−p)·s2` as a density matrix.
    pub fn mixture(p: f64, s1: &Self, s2: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::contract(format!("mixing weight {p} outside [0, 1]")));
        }
        if s1.dim() != s2.dim() {
            return Err(Error::contract("cannot mix states of different dims"));
        }
        Self::mixed(s1.density_matrix().scale(p) + s2.density_matrix().scale(1.0 - p))
    }

    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(v) => v.len(),
            QuantumState::Mixed(rho) => rho.nrows(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, QuantumState::Pure(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QuantumState::Pure(_) => "pure",
            QuantumState::Mixed(_) => "mixed",
        }
    }

    pub fn density_matrix(&self) -> CMatrix {
        match self {
            QuantumState::Pure(v) => v * v.adjoint(),
            QuantumState::Mixed(rho) => rho.clone(),
        }
    }

    /// Weighted pure components `(p_k, |φ_k⟩)` with `Σ p_k |φ_k⟩⟨φ_k|` equal to the state.
    /// Mixed states are split along their eigenbasis; weights below 1e-15 are dropped.
    pub fn ensemble(&self) -> Result<Vec<(f64, CVector)>> {
        match self {
            QuantumState::Pure(v) => Ok(vec![(1.0, v.clone())]),
            QuantumState::Mixed(rho) => {
                let spectrum = eigendecompose(&HermitianOperator::hermitian_part(rho)?)?;
                Ok(spectrum
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 1e-15)
                    .map(|(k, &p)| (p, spectrum.eigenvector(k)))
                    .collect())
            }
        }
    }

    /// Tensor power `s^{⊗n}`.
    pub fn power(&self, n: usize) -> Result<Self> {
        use super::Tensor;
        if n == 0 {
            return Err(Error::contract("tensor power needs n ≥ 1"));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }
}

fn check_state_dim(dim: usize, s: &QuantumState) -> Result<()> {
    if dim != s.dim() {
        return Err(Error::contract(format!(
            "operator dim {dim} does not match state dim {}",
            s.dim()
        )));
    }
    Ok(())
}

/// `⟨ψ|X|ψ⟩` or `Tr[Xρ]` for an arbitrary square matrix.
pub fn expectation_of<M: AsMatrix + ?Sized>(op: &M, s: &QuantumState) -> Result<Complex64> {
    let m = op.as_matrix();
    check_state_dim(m.nrows(), s)?;
    Ok(match s {
        QuantumState::Pure(v) => v.dotc(&(m * v)),
        QuantumState::Mixed(rho) => (m * rho).trace(),
    })
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::NumericalHealth(format!(
            "{what} has imaginary residue {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Real expectation value of an observable.
pub fn expectation(a: &HermitianOperator, s: &QuantumState) -> Result<f64> {
    real_part(expectation_of(a, s)?, "expectation value")
}

/// `⟨X²⟩` for a Hermitian matrix `X` given as any square matrix type.
pub fn mean_square<M: AsMatrix + ?Sized>(op: &M, s: &QuantumState) -> Result<f64> {
    let m = op.as_matrix();
    check_state_dim(m.nrows(), s)?;
    let value = match s {
        QuantumState::Pure(v) => (m * v).norm_squared(),
        QuantumState::Mixed(rho) => {
            let x = m * rho;
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..m.nrows() {
                for j in 0..m.nrows() {
                    tr += x[(i, j)] * m[(j, i)];
                }
            }
            real_part(tr, "mean square")?
        }
    };
    clamp_nonnegative(value, "mean square")
}

/// `⟨(A − ⟨A⟩)²⟩`, clamped at zero within 1e-12.
pub fn variance(a: &HermitianOperator, s: &QuantumState) -> Result<f64> {
    let mean = expectation(a, s)?;
    mean_square(&a.shifted(-mean), s)
}

pub fn std_dev(a: &HermitianOperator, s: &QuantumState) -> Result<f64> {
    Ok(variance(a, s)?.sqrt())
}
