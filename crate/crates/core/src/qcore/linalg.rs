use super::{
    check_dim, CMatrix, CVector, HermitianOperator, QuantumState, UnitaryOperator, DIM_CAP,
};
use crate::{Error, Result};
use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

/// Anything backed by a dense square complex matrix.
pub trait AsMatrix {
    fn as_matrix(&self) -> &CMatrix;
}

impl AsMatrix for CMatrix {
    fn as_matrix(&self) -> &CMatrix {
        self
    }
}

impl AsMatrix for HermitianOperator {
    fn as_matrix(&self) -> &CMatrix {
        self.matrix()
    }
}

impl AsMatrix for UnitaryOperator {
    fn as_matrix(&self) -> &CMatrix {
        self.matrix()
    }
}

/// `AB − BA`.
pub fn commutator<A: AsMatrix + ?Sized, B: AsMatrix + ?Sized>(a: &A, b: &B) -> Result<CMatrix> {
    let (a, b) = (a.as_matrix(), b.as_matrix());
    if a.shape() != b.shape() {
        return Err(Error::contract(format!(
            "commutator of {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(a * b - b * a)
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// Kronecker product with the default dimension cap.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_dim(a.nrows() * b.nrows(), DIM_CAP)?;
    check_dim(a.ncols() * b.ncols(), DIM_CAP)?;
    Ok(a.kronecker(b))
}

/// Tensor product of two operators or two states.
pub trait Tensor: Sized {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self>;

    fn tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_capped(other, DIM_CAP)
    }
}

pub fn tensor_with_cap<T: Tensor>(x: &T, y: &T, cap: usize) -> Result<T> {
    x.tensor_capped(y, cap)
}

impl Tensor for HermitianOperator {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        check_dim(self.dim() * other.dim(), cap)?;
        Ok(HermitianOperator::from_matrix_unchecked(
            self.matrix().kronecker(other.matrix()),
        ))
    }
}

impl Tensor for UnitaryOperator {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        check_dim(self.dim() * other.dim(), cap)?;
        Ok(UnitaryOperator::from_matrix_unchecked(
            self.matrix().kronecker(other.matrix()),
        ))
    }
}

impl Tensor for QuantumState {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        check_dim(self.dim() * other.dim(), cap)?;
        Ok(match (self, other) {
            (QuantumState::Pure(a), QuantumState::Pure(b)) => QuantumState::Pure(a.kronecker(b)),
            _ => QuantumState::Mixed(self.density_matrix().kronecker(&other.density_matrix())),
        })
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl Spectrum {
    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let factor = f(lambda);
            for r in 0..scaled.nrows() {
                scaled[(r, k)] *= factor;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| Complex64::new(l, 0.0))
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

/// Hermitian eigendecomposition, ascending, with a reconstruction check.
pub fn eigendecompose(a: &HermitianOperator) -> Result<Spectrum> {
    let dim = a.dim();
    let eig = SymmetricEigen::try_new(a.matrix().clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(dim, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let spectrum = Spectrum { values, vectors };
    let scale = a.matrix().norm().max(1.0);
    let residual = (spectrum.reconstruct() - a.matrix()).norm();
    if residual > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "eigendecomposition reconstruction error {residual:e}"
        )));
    }
    Ok(spectrum)
}

/// `exp(iH)` through the eigendecomposition of `H`.
pub fn matrix_exp_i(h: &HermitianOperator) -> Result<UnitaryOperator> {
    let spectrum = eigendecompose(h)?;
    UnitaryOperator::new(spectrum.map(|l| Complex64::from_polar(1.0, l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{spin_component, Axis, I, ONE, ZERO};
    use approx::assert_abs_diff_eq;

    fn sigma_x() -> HermitianOperator {
        spin_component(Axis::X).scaled(2.0)
    }

    #[test]
    fn identity_tensor_identity() {
        let id = HermitianOperator::identity(2)
            .tensor(&HermitianOperator::identity(3))
            .unwrap();
        assert_eq!(id, HermitianOperator::identity(6));
    }

    #[test]
    fn sz_tensor_identity_spectrum() {
        let op = spin_component(Axis::Z)
            .tensor(&HermitianOperator::identity(2))
            .unwrap();
        let spectrum = eigendecompose(&op).unwrap();
        let expected = [-0.5, -0.5, 0.5, 0.5];
        for (v, e) in spectrum.values.iter().zip(expected) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn basis_ket_tensor() {
        let zero = QuantumState::basis(2, 0).unwrap();
        let both = zero.tensor(&zero).unwrap();
        assert_eq!(both.dim(), 4);
        match both {
            QuantumState::Pure(v) => {
                assert_eq!(v[0], ONE);
                assert!(v.iter().skip(1).all(|z| *z == ZERO));
            }
            QuantumState::Mixed(_) => panic!("pure ⊗ pure must stay pure"),
        }
    }

    #[test]
    fn tensor_respects_cap() {
        let a = HermitianOperator::identity(64);
        let b = HermitianOperator::identity(65);
        assert!(matches!(a.tensor(&b), Err(Error::Resource { .. })));
        assert!(tensor_with_cap(&a, &a, 100).is_err());
    }

    #[test]
    fn spin_commutator_sz_sx() {
        let c = commutator(&spin_component(Axis::Z), &spin_component(Axis::X)).unwrap();
        let expected = spin_component(Axis::Y).matrix() * I;
        assert!((c - expected).norm() < 1e-15);
    }

    #[test]
    fn self_commutator_vanishes() {
        let a = spin_component(Axis::Y)
            .try_add(&spin_component(Axis::Z))
            .unwrap();
        assert_eq!(commutator(&a, &a).unwrap().norm(), 0.0);
    }

    #[test]
    fn commutator_dim_mismatch() {
        let r = commutator(
            &HermitianOperator::identity(2),
            &HermitianOperator::identity(3),
        );
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = matrix_exp_i(&HermitianOperator::zero(3)).unwrap();
        assert!((u.matrix() - CMatrix::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn exp_half_pi_sigma_x() {
        let h = sigma_x().scaled(std::f64::consts::FRAC_PI_2);
        let u = matrix_exp_i(&h).unwrap();
        let expected = sigma_x().matrix() * I;
        assert!((u.matrix() - expected).norm() < 1e-12);
    }

    #[test]
    fn exp_inverse_pair() {
        let h = spin_component(Axis::X)
            .try_add(&spin_component(Axis::Z).scaled(0.3))
            .unwrap()
            .scaled(1.7);
        let u = matrix_exp_i(&h).unwrap();
        let v = matrix_exp_i(&h.scaled(-1.0)).unwrap();
        assert!((u.matrix() * v.matrix() - CMatrix::identity(2, 2)).norm() < 1e-10);
    }

    #[test]
    fn two_spin_total_sx_spectrum() {
        let sx = spin_component(Axis::X);
        let total = sx
            .embed_left(2)
            .unwrap()
            .try_add(&sx.embed_right(2).unwrap())
            .unwrap();
        let spectrum = eigendecompose(&total).unwrap();
        for (v, e) in spectrum.values.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
        let v = &spectrum.vectors;
        assert!((v.adjoint() * v - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn identity_spectrum_is_flat() {
        let spectrum = eigendecompose(&HermitianOperator::identity(5)).unwrap();
        assert!(spectrum.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }
}
