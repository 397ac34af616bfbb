use super::{check_dim, CMatrix, CVector, DIM_CAP, HERMITIAN_TOL, ONE, UNITARY_TOL, ZERO};
use crate::{Error, Result};
use num_complex::Complex64;

/// A self-adjoint operator on a finite-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    /// Validates squareness, finiteness and element-wise Hermiticity.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || entries.ncols() != dim {
            return Err(Error::contract(format!(
                "operator must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_dim(dim, DIM_CAP)?;
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::contract("operator has non-finite entries"));
        }
        for i in 0..dim {
            for j in i..dim {
                let gap = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if gap > HERMITIAN_TOL {
                    return Err(Error::contract(format!(
                        "operator is not Hermitian at ({i}, {j}): gap {gap:e}"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Hermitian part `(X + X†)/2` of an arbitrary square matrix.
    pub fn hermitian_part(m: &CMatrix) -> Result<Self> {
        Self::new((m + m.adjoint()).scale(0.5))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut m = CMatrix::zeros(dim, dim);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = Complex64::new(d, 0.0);
        }
        Self::new(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            entries: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.scale(factor),
        }
    }

    /// `A + shift·1`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut entries = self.entries.clone();
        for k in 0..self.dim() {
            entries[(k, k)] += Complex64::new(shift, 0.0);
        }
        Self { entries }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::contract(format!(
                "cannot add operators of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    /// `A ⊗ 1_right`.
    pub fn embed_left(&self, right_dim: usize) -> Result<Self> {
        check_dim(self.dim() * right_dim, DIM_CAP)?;
        Ok(Self {
            entries: self
                .entries
                .kronecker(&CMatrix::identity(right_dim, right_dim)),
        })
    }

    /// `1_left ⊗ A`.
    pub fn embed_right(&self, left_dim: usize) -> Result<Self> {
        check_dim(self.dim() * left_dim, DIM_CAP)?;
        Ok(Self {
            entries: CMatrix::identity(left_dim, left_dim).kronecker(&self.entries),
        })
    }

    /// Unitary conjugation `V† A V`.
    pub fn conjugated_by(&self, v: &UnitaryOperator) -> Result<Self> {
        if v.dim() != self.dim() {
            return Err(Error::contract("conjugation dimension mismatch"));
        }
        Self::hermitian_part(&(v.matrix().adjoint() * &self.entries * v.matrix()))
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        let spectrum = super::eigendecompose(self)?;
        Ok(spectrum
            .values
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs())))
    }

    pub(crate) fn from_matrix_unchecked(entries: CMatrix) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        Self { entries }
    }
}

/// A unitary operator on a finite-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator {
    entries: CMatrix,
}

impl UnitaryOperator {
    /// Validates `‖U†U − 1‖_F ≤ 1e-9`.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || entries.ncols() != dim {
            return Err(Error::contract(format!(
                "unitary must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_dim(dim, DIM_CAP)?;
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::contract("unitary has non-finite entries"));
        }
        let defect = (entries.adjoint() * &entries - CMatrix::identity(dim, dim)).norm();
        if defect > UNITARY_TOL {
            return Err(Error::contract(format!(
                "matrix is not unitary: ‖U†U − 1‖ = {defect:e}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::contract(
                "cannot compose unitaries of different dims",
            ));
        }
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }

    /// Heisenberg picture `U† X U` of a Hermitian observable.
    pub fn heisenberg(&self, observable: &HermitianOperator) -> Result<HermitianOperator> {
        observable.conjugated_by(self)
    }

    /// `U ⊗ 1_right`.
    pub fn embed_left(&self, right_dim: usize) -> Result<Self> {
        check_dim(self.dim() * right_dim, DIM_CAP)?;
        Ok(Self {
            entries: self
                .entries
                .kronecker(&CMatrix::identity(right_dim, right_dim)),
        })
    }

    /// Permutation unitary mapping basis vector `k` to `perm[k]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut m = CMatrix::from_element(dim, dim, ZERO);
        let mut seen = vec![false; dim];
        for (k, &target) in perm.iter().enumerate() {
            if target >= dim || seen[target] {
                return Err(Error::contract("not a permutation"));
            }
            seen[target] = true;
            m[(target, k)] = ONE;
        }
        Self::new(m)
    }

    pub(crate) fn from_matrix_unchecked(entries: CMatrix) -> Self {
        Self { entries }
    }
}
