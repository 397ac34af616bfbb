//! Indirect measurement models and their noise/disturbance figures.
//!
//! A model couples the object (dim `d_o`) to an apparatus (dim `d_a`) prepared
//! in `ξ` through an interaction `U`, after which the meter `M` is read. With
//! the input `ψ`, everything is evaluated in `ψ ⊗ ξ`:
//!
//! - noise operator `N = U†(1⊗M)U − A⊗1`, `ε(A)² = ⟨N²⟩`
//! - disturbance operator `D = U†(B⊗1)U − B⊗1`, `η(B)² = ⟨D²⟩`
//!
//! Mixed object or apparatus states use the trace form `Tr[N²(ρ⊗σ)]`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qcore::{
    commutator, expectation_of, mean_square, spin_component, spin_state, std_dev, Axis, CMatrix,
    HermitianOperator, QuantumState, Tensor, UnitaryOperator, ONE, ZERO,
};
use crate::random::{haar_unitary, random_hermitian, random_pure_state};
use crate::{Error, Result};

/// Comparison slack shared by every relation check.
pub const RELATION_TOL: f64 = 1e-9;
/// Magnitudes at or below this are treated as exact zeros in bound formulas.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementModel {
    object_dim: usize,
    apparatus_dim: usize,
    apparatus_state: QuantumState,
    interaction: UnitaryOperator,
    meter: HermitianOperator,
}

#[derive(Deserialize)]
struct RawModel {
    object_dim: usize,
    apparatus_dim: usize,
    apparatus_state: QuantumState,
    interaction: UnitaryOperator,
    meter: HermitianOperator,
}

impl<'de> Deserialize<'de> for MeasurementModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawModel::deserialize(d)?;
        MeasurementModel::new(
            raw.object_dim,
            raw.apparatus_dim,
            raw.apparatus_state,
            raw.interaction,
            raw.meter,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl MeasurementModel {
    pub fn new(
        object_dim: usize,
        apparatus_dim: usize,
        apparatus_state: QuantumState,
        interaction: UnitaryOperator,
        meter: HermitianOperator,
    ) -> Result<Self> {
        if object_dim == 0 || apparatus_dim == 0 {
            return Err(Error::contract("model dimensions must be positive"));
        }
        if interaction.dim() != object_dim * apparatus_dim {
            return Err(Error::contract(format!(
                "interaction dim {} != {object_dim}·{apparatus_dim}",
                interaction.dim()
            )));
        }
        if apparatus_state.dim() != apparatus_dim || meter.dim() != apparatus_dim {
            return Err(Error::contract(format!(
                "apparatus state dim {} and meter dim {} must equal {apparatus_dim}",
                apparatus_state.dim(),
                meter.dim()
            )));
        }
        Ok(Self {
            object_dim,
            apparatus_dim,
            apparatus_state,
            interaction,
            meter,
        })
    }

    pub fn object_dim(&self) -> usize {
        self.object_dim
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus_dim
    }

    pub fn composite_dim(&self) -> usize {
        self.object_dim * self.apparatus_dim
    }

    pub fn apparatus_state(&self) -> &QuantumState {
        &self.apparatus_state
    }

    pub fn interaction(&self) -> &UnitaryOperator {
        &self.interaction
    }

    pub fn meter(&self) -> &HermitianOperator {
        &self.meter
    }

    /// Same model with the apparatus prepared in `state`.
    pub fn with_apparatus_state(&self, state: QuantumState) -> Result<Self> {
        Self::new(
            self.object_dim,
            self.apparatus_dim,
            state,
            self.interaction.clone(),
            self.meter.clone(),
        )
    }

    /// `ψ ⊗ ξ`.
    pub fn joint_state(&self, psi: &QuantumState) -> Result<QuantumState> {
        self.check_object_state(psi)?;
        psi.tensor(&self.apparatus_state)
    }

    /// Heisenberg-picture meter `U†(1⊗M)U`.
    pub fn meter_output(&self) -> Result<HermitianOperator> {
        self.interaction
            .heisenberg(&self.meter.embed_right(self.object_dim)?)
    }

    /// `U†(1⊗M)U − A⊗1`.
    pub fn noise_operator(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_object_op(a, "measured observable")?;
        self.meter_output()?
            .try_add(&a.embed_left(self.apparatus_dim)?.scaled(-1.0))
    }

    /// `U†(B⊗1)U − B⊗1`; a composite-space `B` is used as given.
    pub fn disturbance_operator(&self, b: &HermitianOperator) -> Result<HermitianOperator> {
        let full = self.lift(b)?;
        self.interaction
            .heisenberg(&full)?
            .try_add(&full.scaled(-1.0))
    }

    fn lift(&self, b: &HermitianOperator) -> Result<HermitianOperator> {
        if b.dim() == self.object_dim {
            b.embed_left(self.apparatus_dim)
        } else if b.dim() == self.composite_dim() {
            Ok(b.clone())
        } else {
            Err(Error::contract(format!(
                "observable dim {} fits neither object ({}) nor composite ({})",
                b.dim(),
                self.object_dim,
                self.composite_dim()
            )))
        }
    }

    fn check_object_op(&self, a: &HermitianOperator, what: &str) -> Result<()> {
        if a.dim() != self.object_dim {
            return Err(Error::contract(format!(
                "{what} has dim {}, object dim is {}",
                a.dim(),
                self.object_dim
            )));
        }
        Ok(())
    }

    fn check_object_state(&self, psi: &QuantumState) -> Result<()> {
        if psi.dim() != self.object_dim {
            return Err(Error::contract(format!(
                "input state has dim {}, object dim is {}",
                psi.dim(),
                self.object_dim
            )));
        }
        Ok(())
    }
}

/// `ε(A)²`.
pub fn noise_squared(
    m: &MeasurementModel,
    a: &HermitianOperator,
    psi: &QuantumState,
) -> Result<f64> {
    let n = m.noise_operator(a)?;
    mean_square(&n, &m.joint_state(psi)?)
}

/// Root-mean-square noise `ε(A)`.
pub fn noise(m: &MeasurementModel, a: &HermitianOperator, psi: &QuantumState) -> Result<f64> {
    Ok(noise_squared(m, a, psi)?.sqrt())
}

/// `η(B)²`.
pub fn disturbance_squared(
    m: &MeasurementModel,
    b: &HermitianOperator,
    psi: &QuantumState,
) -> Result<f64> {
    let d = m.disturbance_operator(b)?;
    mean_square(&d, &m.joint_state(psi)?)
}

/// Root-mean-square disturbance `η(B)`.
pub fn disturbance(m: &MeasurementModel, b: &HermitianOperator, psi: &QuantumState) -> Result<f64> {
    Ok(disturbance_squared(m, b, psi)?.sqrt())
}

/// `½|⟨[A,B]⟩|` in `psi`.
pub fn half_commutator_expectation(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &QuantumState,
) -> Result<f64> {
    Ok(0.5 * expectation_of(&commutator(a, b)?, psi)?.norm())
}

/// Outcome of one inequality check `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub components: BTreeMap<String, f64>,
}

impl RelationReport {
    pub fn new(relation: &str, lhs: f64, rhs: f64, components: BTreeMap<String, f64>) -> Self {
        let slack = lhs - rhs;
        Self {
            relation: relation.to_string(),
            lhs,
            rhs,
            slack,
            holds: slack >= -RELATION_TOL,
            components,
        }
    }

    pub fn component(&self, name: &str) -> Option<f64> {
        self.components.get(name).copied()
    }
}

fn components(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Robertson relation `σ(A)σ(B) ≥ ½|⟨[A,B]⟩|`.
pub fn check_robertson(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &QuantumState,
) -> Result<RelationReport> {
    let sa = std_dev(a, psi)?;
    let sb = std_dev(b, psi)?;
    let rhs = half_commutator_expectation(a, b, psi)?;
    Ok(RelationReport::new(
        "robertson",
        sa * sb,
        rhs,
        components(&[
            ("sigma_a", sa),
            ("sigma_b", sb),
            ("half_abs_commutator", rhs),
        ]),
    ))
}

/// Heisenberg-type noise-disturbance relation `ε(A)η(B) ≥ ½|⟨[A,B]⟩|`,
/// which fails for some models.
pub fn check_heisenberg(
    m: &MeasurementModel,
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &QuantumState,
) -> Result<RelationReport> {
    let eps = noise(m, a, psi)?;
    let eta = disturbance(m, b, psi)?;
    let rhs = half_commutator_expectation(a, b, psi)?;
    Ok(RelationReport::new(
        "heisenberg",
        eps * eta,
        rhs,
        components(&[("epsilon", eps), ("eta", eta), ("half_abs_commutator", rhs)]),
    ))
}

/// Universally valid relation `εη + σ(A)η + εσ(B) ≥ ½|⟨[A,B]⟩|`, with the
/// standard deviations taken in the input state.
pub fn check_uup(
    m: &MeasurementModel,
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &QuantumState,
) -> Result<RelationReport> {
    let eps = noise(m, a, psi)?;
    let eta = disturbance(m, b, psi)?;
    let sa = std_dev(a, psi)?;
    let sb = std_dev(b, psi)?;
    let rhs = half_commutator_expectation(a, b, psi)?;
    Ok(RelationReport::new(
        "uup",
        eps * eta + sa * eta + eps * sb,
        rhs,
        components(&[
            ("epsilon", eps),
            ("eta", eta),
            ("sigma_a", sa),
            ("sigma_b", sb),
            ("half_abs_commutator", rhs),
        ]),
    ))
}

/// A lower bound that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Finite(f64),
    Unbounded,
}

impl Bound {
    /// `numerator / denominator` with the 0/0 → 0 and x/0 → ∞ conventions.
    pub fn ratio(numerator: f64, denominator: f64) -> Self {
        if denominator.abs() <= ZERO_TOL {
            if numerator.abs() <= ZERO_TOL {
                Bound::Finite(0.0)
            } else {
                Bound::Unbounded
            }
        } else {
            Bound::Finite(numerator / denominator)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Bound::Unbounded)
    }

    /// Whether `value` satisfies `value ≥ bound − tol`.
    pub fn admits(self, value: f64, tol: f64) -> bool {
        match self {
            Bound::Finite(b) => value >= b - tol,
            Bound::Unbounded => false,
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_f64(*v),
            Bound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Bound::Finite(v)),
            Raw::Tag(t) if t == "unbounded" => Ok(Bound::Unbounded),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("unknown bound `{t}`"))),
        }
    }
}

/// Lower bound `½|⟨[A,B]⟩| / σ(B)` on `ε(A)` for measurements that leave `B`
/// undisturbed.
pub fn nondisturbing_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &QuantumState,
) -> Result<Bound> {
    let half = half_commutator_expectation(a, b, psi)?;
    let sb = std_dev(b, psi)?;
    Ok(Bound::ratio(half, sb))
}

/// Observables, input state and model for one relation check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCase {
    pub model: MeasurementModel,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    pub psi: QuantumState,
}

/// Haar-random interaction, random pure apparatus state, random Hermitian meter.
pub fn random_model_with<R: Rng + ?Sized>(
    object_dim: usize,
    apparatus_dim: usize,
    rng: &mut R,
) -> Result<MeasurementModel> {
    if object_dim < 2 || apparatus_dim < 2 {
        return Err(Error::contract("random models need dims ≥ 2"));
    }
    let u = haar_unitary(object_dim * apparatus_dim, rng);
    let xi = random_pure_state(apparatus_dim, rng);
    let meter = random_hermitian(apparatus_dim, rng);
    MeasurementModel::new(object_dim, apparatus_dim, xi, u, meter)
}

/// Deterministic random model for `seed`.
pub fn random_model(
    object_dim: usize,
    apparatus_dim: usize,
    seed: u64,
) -> Result<MeasurementModel> {
    random_model_with(
        object_dim,
        apparatus_dim,
        &mut crate::random::seeded_rng(seed),
    )
}

/// Random model together with random observables and a random pure input.
pub fn random_case<R: Rng + ?Sized>(
    object_dim: usize,
    apparatus_dim: usize,
    rng: &mut R,
) -> Result<RelationCase> {
    let model = random_model_with(object_dim, apparatus_dim, rng)?;
    let a = random_hermitian(object_dim, rng);
    let b = random_hermitian(object_dim, rng);
    let psi = random_pure_state(object_dim, rng);
    Ok(RelationCase { model, a, b, psi })
}

/// Controlled-NOT probe that copies the `S_z` basis into a qubit meter:
/// `U = |0⟩⟨0|⊗1 + |1⟩⟨1|⊗σ_x`, `ξ = |0⟩`, `M = S_z`.
pub fn projective_sz_model() -> MeasurementModel {
    #[rustfmt::skip]
    let cnot = CMatrix::from_row_slice(4, 4, &[
        ONE,  ZERO, ZERO, ZERO,
        ZERO, ONE,  ZERO, ZERO,
        ZERO, ZERO, ZERO, ONE,
        ZERO, ZERO, ONE,  ZERO,
    ]);
    MeasurementModel::new(
        2,
        2,
        spin_state(Axis::Z, true),
        UnitaryOperator::new(cnot).expect("CNOT is unitary"),
        spin_component(Axis::Z),
    )
    .expect("projective model is well formed")
}

/// The stored counterexample: the projective `S_z` probe with `A = S_z`,
/// `B = S_x`, `ψ = (|0⟩ + i|1⟩)/√2`. It has `ε = 0` but `η = 1/√2` and
/// `½|⟨[A,B]⟩| = 1/4`.
pub fn heisenberg_exhibit() -> RelationCase {
    RelationCase {
        model: projective_sz_model(),
        a: spin_component(Axis::Z),
        b: spin_component(Axis::X),
        psi: spin_state(Axis::Y, true),
    }
}
