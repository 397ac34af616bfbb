//! Additive conserved charges and the noise bound they impose.
//!
//! For `C = L₁⊗1 + 1⊗L₂` with `[U, C] = 0` and a meter commuting with `L₂`,
//! every measurement of `A` obeys
//!
//! `ε(A)² ≥ |⟨[A, L₁]⟩|² / (4σ(L₁)² + 4σ(L₂)²)`
//!
//! with `σ(L₁)` taken in the object input and `σ(L₂)` in the apparatus state.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::measurement::{disturbance, noise_squared, Bound, MeasurementModel, RelationReport};
use crate::optimizer::commutant_basis;
use crate::qcore::{
    commutator, expectation_of, frobenius_norm, variance, HermitianOperator, QuantumState,
};
use crate::random::{haar_unitary, random_density_matrix, random_hermitian, random_pure_state};
use crate::{Error, Result};

/// Both conditions are deemed satisfied at or below this commutator norm.
pub const CONDITION_TOL: f64 = 1e-9;

/// `L₁ ⊗ 1 + 1 ⊗ L₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedCharge {
    pub l1: HermitianOperator,
    pub l2: HermitianOperator,
}

impl ConservedCharge {
    pub fn new(l1: HermitianOperator, l2: HermitianOperator) -> Self {
        Self { l1, l2 }
    }

    pub fn total(&self) -> Result<HermitianOperator> {
        self.l1
            .embed_left(self.l2.dim())?
            .try_add(&self.l2.embed_right(self.l1.dim())?)
    }

    fn check_dims(&self, m: &MeasurementModel) -> Result<()> {
        if self.l1.dim() != m.object_dim() || self.l2.dim() != m.apparatus_dim() {
            return Err(Error::contract(format!(
                "charge dims ({}, {}) do not match model dims ({}, {})",
                self.l1.dim(),
                self.l2.dim(),
                m.object_dim(),
                m.apparatus_dim()
            )));
        }
        Ok(())
    }
}

/// `‖[U, L₁⊗1 + 1⊗L₂]‖_F`.
pub fn check_conservation(m: &MeasurementModel, c: &ConservedCharge) -> Result<f64> {
    c.check_dims(m)?;
    Ok(frobenius_norm(&commutator(m.interaction(), &c.total()?)?))
}

/// `‖[M, L₂]‖_F`.
pub fn check_yanase(m: &MeasurementModel, c: &ConservedCharge) -> Result<f64> {
    c.check_dims(m)?;
    Ok(frobenius_norm(&commutator(m.meter(), &c.l2)?))
}

/// Lower bound on `ε(A)²`; unbounded when the variances vanish but the
/// commutator does not.
pub fn way_bound(
    a: &HermitianOperator,
    c: &ConservedCharge,
    psi: &QuantumState,
    xi: &QuantumState,
) -> Result<Bound> {
    if a.dim() != c.l1.dim() || psi.dim() != c.l1.dim() || xi.dim() != c.l2.dim() {
        return Err(Error::contract(
            "way_bound: A, l1 and ψ must share the object dim, ξ the apparatus dim",
        ));
    }
    let numerator = expectation_of(&commutator(a, &c.l1)?, psi)?.norm_sqr();
    let denominator = 4.0 * variance(&c.l1, psi)? + 4.0 * variance(&c.l2, xi)?;
    Ok(Bound::ratio(numerator, denominator))
}

/// A WAY check together with the precondition diagnostics behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WayReport {
    pub report: RelationReport,
    pub conservation_norm: f64,
    pub yanase_norm: f64,
    /// `η(L₁⊗1 + 1⊗L₂)`, zero when the charge is conserved.
    pub total_disturbance: f64,
}

/// Compare `ε(A)²` with [`way_bound`]. Fails with a precondition error, not a
/// report, when the model breaks either condition.
pub fn verify_way(
    m: &MeasurementModel,
    a: &HermitianOperator,
    c: &ConservedCharge,
    psi: &QuantumState,
) -> Result<WayReport> {
    let conservation_norm = check_conservation(m, c)?;
    if conservation_norm > CONDITION_TOL {
        return Err(Error::Precondition {
            condition: "conservation [U, L1+L2] = 0",
            norm: conservation_norm,
        });
    }
    let yanase_norm = check_yanase(m, c)?;
    if yanase_norm > CONDITION_TOL {
        return Err(Error::Precondition {
            condition: "Yanase [M, L2] = 0",
            norm: yanase_norm,
        });
    }
    let rhs = way_bound(a, c, psi, m.apparatus_state())?
        .finite()
        .ok_or_else(|| {
            Error::Numerical("WAY bound is unbounded for a state with ⟨[A, L1]⟩ ≠ 0".into())
        })?;
    let lhs = noise_squared(m, a, psi)?;
    let total_disturbance = disturbance(m, &c.total()?, psi)?;
    let report = RelationReport::new(
        "way",
        lhs,
        rhs,
        [
            ("epsilon_squared", lhs),
            ("sigma_l1_squared", variance(&c.l1, psi)?),
            ("sigma_l2_squared", variance(&c.l2, m.apparatus_state())?),
            ("total_disturbance", total_disturbance),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect(),
    );
    Ok(WayReport {
        report,
        conservation_norm,
        yanase_norm,
        total_disturbance,
    })
}

/// Model, observable, charge and input for one WAY check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WayCase {
    pub model: MeasurementModel,
    pub a: HermitianOperator,
    pub charge: ConservedCharge,
    pub psi: QuantumState,
}

/// `V diag(k) V†` with integer `k ∈ [-2, 2]`, so eigenvalues repeat often.
fn random_charge<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<HermitianOperator> {
    let diag: Vec<f64> = (0..dim).map(|_| rng.random_range(-2..=2) as f64).collect();
    HermitianOperator::from_real_diagonal(&diag)?.conjugated_by(&haar_unitary(dim, rng))
}

/// Random model that satisfies both conditions exactly: the interaction is
/// block-Haar in the eigenspaces of the total charge and the meter is block
/// diagonal in those of `L₂`. The apparatus state is mixed one time in four.
pub fn random_conserving_case<R: Rng + ?Sized>(
    object_dim: usize,
    apparatus_dim: usize,
    rng: &mut R,
) -> Result<WayCase> {
    if object_dim < 2 || apparatus_dim < 2 {
        return Err(Error::contract("random models need dims ≥ 2"));
    }
    let charge = ConservedCharge::new(
        random_charge(object_dim, rng)?,
        random_charge(apparatus_dim, rng)?,
    );
    let u = commutant_basis(&charge.total()?)?.sample_unitary(rng)?;
    let meter = commutant_basis(&charge.l2)?.sample_hermitian(rng)?;
    let xi = if rng.random_bool(0.25) {
        random_density_matrix(apparatus_dim, rng)?
    } else {
        random_pure_state(apparatus_dim, rng)
    };
    let model = MeasurementModel::new(object_dim, apparatus_dim, xi, u, meter)?;
    Ok(WayCase {
        model,
        a: random_hermitian(object_dim, rng),
        charge,
        psi: random_pure_state(object_dim, rng),
    })
}
