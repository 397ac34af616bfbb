//! JSON wire format: `{"dim": d, "entries": [[re, im], ...]}` in row-major
//! order. States carry an extra `"kind": "pure" | "mixed"`; pure states list
//! `d` amplitudes, mixed states list the `d²` density-matrix entries.

use super::{CMatrix, CVector, HermitianOperator, QuantumState, UnitaryOperator};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateRepr {
    pub kind: String,
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

fn to_pairs<'a>(it: impl Iterator<Item = &'a Complex64>) -> Vec<[f64; 2]> {
    it.map(|z| [z.re, z.im]).collect()
}

fn row_major(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            out.push([z.re, z.im]);
        }
    }
    out
}

impl MatrixRepr {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            entries: row_major(m),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::Usage(format!(
                "matrix of dim {} needs {} entries, got {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        let flat: Vec<Complex64> = self
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Ok(CMatrix::from_row_slice(self.dim, self.dim, &flat))
    }
}

impl From<HermitianOperator> for MatrixRepr {
    fn from(op: HermitianOperator) -> Self {
        Self::from_matrix(op.matrix())
    }
}

impl TryFrom<MatrixRepr> for HermitianOperator {
    type Error = Error;
    fn try_from(repr: MatrixRepr) -> Result<Self> {
        HermitianOperator::new(repr.to_matrix()?)
    }
}

impl From<UnitaryOperator> for MatrixRepr {
    fn from(op: UnitaryOperator) -> Self {
        Self::from_matrix(op.matrix())
    }
}

impl TryFrom<MatrixRepr> for UnitaryOperator {
    type Error = Error;
    fn try_from(repr: MatrixRepr) -> Result<Self> {
        UnitaryOperator::new(repr.to_matrix()?)
    }
}

impl From<QuantumState> for StateRepr {
    fn from(s: QuantumState) -> Self {
        match &s {
            QuantumState::Pure(v) => Self {
                kind: "pure".into(),
                dim: v.len(),
                entries: to_pairs(v.iter()),
            },
            QuantumState::Mixed(rho) => Self {
                kind: "mixed".into(),
                dim: rho.nrows(),
                entries: row_major(rho),
            },
        }
    }
}

impl TryFrom<StateRepr> for QuantumState {
    type Error = Error;
    fn try_from(repr: StateRepr) -> Result<Self> {
        match repr.kind.as_str() {
            "pure" => {
                if repr.entries.len() != repr.dim {
                    return Err(Error::Usage(format!(
                        "pure state of dim {} has {} entries",
                        repr.dim,
                        repr.entries.len()
                    )));
                }
                QuantumState::pure(CVector::from_iterator(
                    repr.dim,
                    repr.entries.iter().map(|[re, im]| Complex64::new(*re, *im)),
                ))
            }
            "mixed" => {
                let m = MatrixRepr {
                    dim: repr.dim,
                    entries: repr.entries,
                }
                .to_matrix()?;
                QuantumState::mixed(m)
            }
            other => Err(Error::Usage(format!("unknown state kind `{other}`"))),
        }
    }
}

macro_rules! serde_via {
    ($ty:ty, $repr:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                <$repr>::from(self.clone()).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                let repr = <$repr>::deserialize(d)?;
                <$ty>::try_from(repr).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via!(HermitianOperator, MatrixRepr);
serde_via!(UnitaryOperator, MatrixRepr);
serde_via!(QuantumState, StateRepr);
