use super::{CMatrix, CVector, HermitianOperator, QuantumState, I, ONE, ZERO};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Spin-1/2 component `S_axis = σ_axis / 2` (ħ = 1).
pub fn spin_component(axis: Axis) -> HermitianOperator {
    let half = Complex64::new(0.5, 0.0);
    let entries = match axis {
        Axis::X => CMatrix::from_row_slice(2, 2, &[ZERO, half, half, ZERO]),
        Axis::Y => CMatrix::from_row_slice(2, 2, &[ZERO, -I * 0.5, I * 0.5, ZERO]),
        Axis::Z => CMatrix::from_row_slice(2, 2, &[half, ZERO, ZERO, -half]),
    };
    HermitianOperator::from_matrix_unchecked(entries)
}

/// Spin-1/2 eigenstate `|S_axis = ±1/2⟩`.
///
/// `|S_y = +1/2⟩ = (|0⟩ + i|1⟩)/√2`.
pub fn spin_state(axis: Axis, up: bool) -> QuantumState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if up { 1.0 } else { -1.0 };
    let v = match (axis, up) {
        (Axis::Z, true) => CVector::from_vec(vec![ONE, ZERO]),
        (Axis::Z, false) => CVector::from_vec(vec![ZERO, ONE]),
        (Axis::X, _) => CVector::from_vec(vec![ONE * r, ONE * (sign * r)]),
        (Axis::Y, _) => CVector::from_vec(vec![ONE * r, I * (sign * r)]),
    };
    QuantumState::Pure(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{eigendecompose, expectation, std_dev};

    #[test]
    fn sz_matches_computational_basis() {
        let sz = spin_component(Axis::Z);
        assert_eq!(sz.matrix()[(0, 0)].re, 0.5);
        assert_eq!(sz.matrix()[(1, 1)].re, -0.5);
        let sx = spin_component(Axis::X);
        assert_eq!(sx.matrix()[(0, 1)].re, 0.5);
        assert_eq!(sx.matrix()[(1, 0)].re, 0.5);
    }

    #[test]
    fn squares_are_quarter_identity() {
        for axis in Axis::ALL {
            let s = spin_component(axis);
            let sq = s.matrix() * s.matrix();
            assert!((sq - CMatrix::identity(2, 2).scale(0.25)).norm() < 1e-15);
        }
    }

    #[test]
    fn sz_spectrum() {
        let spectrum = eigendecompose(&spin_component(Axis::Z)).unwrap();
        assert_eq!(spectrum.values.as_slice(), &[-0.5, 0.5]);
    }

    #[test]
    fn spin_states_are_eigenstates() {
        for axis in Axis::ALL {
            for up in [true, false] {
                let psi = spin_state(axis, up);
                let s = spin_component(axis);
                let expected = if up { 0.5 } else { -0.5 };
                assert!((expectation(&s, &psi).unwrap() - expected).abs() < 1e-15);
                assert!(std_dev(&s, &psi).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn sx_spread_in_sy_eigenstate() {
        let psi = spin_state(Axis::Y, true);
        let sigma = std_dev(&spin_component(Axis::X), &psi).unwrap();
        assert!((sigma - 0.5).abs() < 1e-15);
    }
}
