//! Hadamard gates realized under angular-momentum conservation.
//!
//! The qubit's computational basis is the `S_z` basis. An implementation `U`
//! of the Hadamard gate acts on qubit ⊗ ancilla and commutes with
//! `S_x ⊗ 1 + 1 ⊗ L_x`. Running `U` and then reading `S_x` of the qubit is a
//! measurement of `S_z`; its squared noise
//!
//! `P_e = ⟨(U†(S_x⊗1)U − S_z⊗1)²⟩` in `ψ ⊗ ξ`
//!
//! is the gate error probability. For `ψ = |S_y = +1/2⟩` it obeys
//! `P_e ≥ 1/(4 + 4(2σ(L_x))²)`, which specializes to the coherent-field,
//! number-state and spin-ensemble bounds below.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::conservation::ConservedCharge;
use crate::measurement::{half_commutator_expectation, MeasurementModel, RELATION_TOL};
use crate::qcore::{
    check_dim, commutator, mean_square, spin_component, spin_state, std_dev, Axis, CMatrix,
    CVector, HermitianOperator, QuantumState, Tensor, UnitaryOperator, DIM_CAP, ONE, ZERO,
};
use crate::{Error, Result};

/// Tolerance on `‖[U, charge]‖_F` for an implementation to count as conserving.
pub const CONSERVATION_TOL: f64 = 1e-9;

/// `H = (|0⟩⟨0| + |1⟩⟨0| + |0⟩⟨1| − |1⟩⟨1|)/√2`.
pub fn hadamard() -> UnitaryOperator {
    let r = ONE * std::f64::consts::FRAC_1_SQRT_2;
    UnitaryOperator::new(CMatrix::from_row_slice(2, 2, &[r, r, r, -r])).expect("H is unitary")
}

/// Default input `ψ = (|0⟩ + i|1⟩)/√2`, which maximizes `|⟨[S_z, S_x]⟩|`.
pub fn default_input() -> QuantumState {
    spin_state(Axis::Y, true)
}

/// Which components of total angular momentum an implementation must conserve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conservation {
    /// `[U, S_x + L_x] = 0`.
    #[default]
    X,
    /// All three components; spin ancillas only.
    Full,
    /// No constraint; control case.
    None,
}

/// Control system coupled to the qubit.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AncillaSpec {
    /// One-dimensional ancilla with `L_x = 0`.
    None,
    /// `n` spin-1/2 systems, `L_x = Σ_j S_x^(j)`.
    Spins {
        n: usize,
        state: QuantumState,
        separable: bool,
    },
    /// Single field mode truncated at `cutoff` photons, `L_x = N`.
    Boson {
        cutoff: usize,
        field_state: QuantumState,
    },
}

impl AncillaSpec {
    pub fn spins(n: usize, state: QuantumState, separable: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::contract("spin ancilla needs n ≥ 1"));
        }
        let dim = spin_register_dim(n)?;
        if state.dim() != dim {
            return Err(Error::contract(format!(
                "{n}-spin ancilla state must have dim {dim}, got {}",
                state.dim()
            )));
        }
        Ok(AncillaSpec::Spins {
            n,
            state,
            separable,
        })
    }

    pub fn boson(cutoff: usize, field_state: QuantumState) -> Result<Self> {
        if field_state.dim() != cutoff + 1 {
            return Err(Error::contract(format!(
                "field state for cutoff {cutoff} must have dim {}, got {}",
                cutoff + 1,
                field_state.dim()
            )));
        }
        Ok(AncillaSpec::Boson {
            cutoff,
            field_state,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            AncillaSpec::None => 1,
            AncillaSpec::Spins { state, .. } => state.dim(),
            AncillaSpec::Boson { cutoff, .. } => cutoff + 1,
        }
    }

    pub fn state(&self) -> QuantumState {
        match self {
            AncillaSpec::None => QuantumState::Pure(CVector::from_element(1, ONE)),
            AncillaSpec::Spins { state, .. } => state.clone(),
            AncillaSpec::Boson { field_state, .. } => field_state.clone(),
        }
    }

    /// Same ancilla kind prepared in another state.
    pub fn with_state(&self, state: QuantumState) -> Result<Self> {
        match self {
            AncillaSpec::None => {
                if state.dim() != 1 {
                    return Err(Error::contract("trivial ancilla has dim 1"));
                }
                Ok(AncillaSpec::None)
            }
            AncillaSpec::Spins { n, separable, .. } => Self::spins(*n, state, *separable),
            AncillaSpec::Boson { cutoff, .. } => Self::boson(*cutoff, state),
        }
    }

    /// Ancilla angular momentum along `axis`.
    pub fn angular_momentum(&self, axis: Axis) -> Result<HermitianOperator> {
        match (self, axis) {
            (AncillaSpec::None, _) => Ok(HermitianOperator::zero(1)),
            (AncillaSpec::Spins { n, .. }, _) => spin_ensemble_total(axis, *n),
            (AncillaSpec::Boson { cutoff, .. }, Axis::X) => Ok(number_operator(*cutoff)),
            (AncillaSpec::Boson { .. }, _) => Err(Error::contract(
                "field ancilla carries only L_x = N; transverse components are not modeled",
            )),
        }
    }

    pub fn lx(&self) -> Result<HermitianOperator> {
        self.angular_momentum(Axis::X)
    }

    /// `σ(L_x)` in the ancilla's state.
    pub fn sigma_lx(&self) -> Result<f64> {
        std_dev(&self.lx()?, &self.state())
    }

    pub fn label(&self) -> String {
        match self {
            AncillaSpec::None => "none".into(),
            AncillaSpec::Spins { n, separable, .. } => {
                format!(
                    "spins(n={n}, {})",
                    if *separable { "separable" } else { "general" }
                )
            }
            AncillaSpec::Boson { cutoff, .. } => format!("boson(cutoff={cutoff})"),
        }
    }
}

/// Total charges `S_a ⊗ 1 + 1 ⊗ L_a` an implementation must commute with.
pub fn conserved_charges(
    ancilla: &AncillaSpec,
    conservation: Conservation,
) -> Result<Vec<HermitianOperator>> {
    let axes: &[Axis] = match conservation {
        Conservation::X => &[Axis::X],
        Conservation::Full => &Axis::ALL,
        Conservation::None => &[],
    };
    axes.iter()
        .map(|&axis| {
            let l = ancilla.angular_momentum(axis)?;
            spin_component(axis)
                .embed_left(ancilla.dim())?
                .try_add(&l.embed_right(2)?)
        })
        .collect()
}

/// Largest `‖[U, charge]‖_F` over the required charges.
pub fn conservation_defect(
    implementation: &UnitaryOperator,
    ancilla: &AncillaSpec,
    conservation: Conservation,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for charge in conserved_charges(ancilla, conservation)? {
        worst = worst.max(commutator(implementation, &charge)?.norm());
    }
    Ok(worst)
}

/// A candidate Hadamard implementation on qubit ⊗ ancilla.
#[derive(Clone, Debug, Serialize)]
pub struct GateScenario {
    ancilla: AncillaSpec,
    conservation: Conservation,
    implementation: UnitaryOperator,
}

impl GateScenario {
    /// Scenario conserving `S_x + L_x`.
    pub fn new(ancilla: AncillaSpec, implementation: UnitaryOperator) -> Result<Self> {
        Self::with_conservation(ancilla, implementation, Conservation::X)
    }

    pub fn with_conservation(
        ancilla: AncillaSpec,
        implementation: UnitaryOperator,
        conservation: Conservation,
    ) -> Result<Self> {
        let dim = 2 * ancilla.dim();
        if implementation.dim() != dim {
            return Err(Error::contract(format!(
                "implementation dim {} != 2·{}",
                implementation.dim(),
                ancilla.dim()
            )));
        }
        let defect = conservation_defect(&implementation, &ancilla, conservation)?;
        if defect > CONSERVATION_TOL {
            return Err(Error::contract(format!(
                "implementation does not conserve angular momentum: ‖[U, S+L]‖ = {defect:e}"
            )));
        }
        Ok(Self {
            ancilla,
            conservation,
            implementation,
        })
    }

    pub fn target(&self) -> UnitaryOperator {
        hadamard()
    }

    pub fn ancilla(&self) -> &AncillaSpec {
        &self.ancilla
    }

    pub fn conservation(&self) -> Conservation {
        self.conservation
    }

    pub fn implementation(&self) -> &UnitaryOperator {
        &self.implementation
    }

    /// The gate as a measurement of `S_z` in the standard indirect form.
    ///
    /// The apparatus is a probe qubit (prepared in `|S_x = +1/2⟩`) next to the
    /// ancilla. The interaction runs `U` on qubit ⊗ ancilla and then swaps the
    /// qubit with the probe, so reading `M = S_x ⊗ 1` on the probe reproduces
    /// `U†(S_x⊗1)U`. The charge `(S_x, S_x ⊗ 1 + 1 ⊗ L_x)` is conserved, the
    /// meter commutes with its apparatus part and the probe adds no spread.
    pub fn measurement_model(&self) -> Result<(MeasurementModel, ConservedCharge)> {
        let d = self.ancilla.dim();
        let n = 4 * d;
        let u = self.implementation.matrix();
        // Index (o, q, a) ↦ o·2d + q·d + a for object o, probe q, ancilla a.
        let idx = |o: usize, q: usize, a: usize| o * 2 * d + q * d + a;
        let mut full = CMatrix::zeros(n, n);
        for q in 0..2 {
            for (o, a) in (0..2).flat_map(|o| (0..d).map(move |a| (o, a))) {
                for (o2, a2) in (0..2).flat_map(|o| (0..d).map(move |a| (o, a))) {
                    // U first, then swap object and probe.
                    full[(idx(q, o, a), idx(o2, q, a2))] = u[(o * d + a, o2 * d + a2)];
                }
            }
        }
        let interaction = UnitaryOperator::new(full)?;
        let probe_x = spin_component(Axis::X).embed_left(d)?;
        let l2 = probe_x.try_add(&self.ancilla.lx()?.embed_right(2)?)?;
        let xi = spin_state(Axis::X, true).tensor(&self.ancilla.state())?;
        let model = MeasurementModel::new(2, 2 * d, xi, interaction, probe_x)?;
        Ok((model, ConservedCharge::new(spin_component(Axis::X), l2)))
    }
}

/// `U†(S_x⊗1)U − S_z⊗1` on qubit ⊗ ancilla.
pub fn gate_noise_operator(
    implementation: &UnitaryOperator,
    ancilla_dim: usize,
) -> Result<HermitianOperator> {
    let sx = spin_component(Axis::X).embed_left(ancilla_dim)?;
    let sz = spin_component(Axis::Z).embed_left(ancilla_dim)?;
    implementation.heisenberg(&sx)?.try_add(&sz.scaled(-1.0))
}

/// `ε(S_z)²` for an arbitrary implementation, with no conservation check.
pub fn gate_error_probability_unconstrained(
    implementation: &UnitaryOperator,
    ancilla_state: &QuantumState,
    psi: &QuantumState,
) -> Result<f64> {
    if psi.dim() != 2 {
        return Err(Error::contract("gate input must be a qubit state"));
    }
    if implementation.dim() != 2 * ancilla_state.dim() {
        return Err(Error::contract(
            "implementation does not act on qubit ⊗ ancilla",
        ));
    }
    let noise = gate_noise_operator(implementation, ancilla_state.dim())?;
    mean_square(&noise, &psi.tensor(ancilla_state)?)
}

/// Gate error probability `P_e = ε(S_z)²` (ħ = 1).
pub fn gate_error_probability(s: &GateScenario, psi: &QuantumState) -> Result<f64> {
    gate_error_probability_unconstrained(&s.implementation, &s.ancilla.state(), psi)
}

/// `1/(4 + 4(2σ(L_x))²)`.
pub fn bound_general(sigma_lx: f64) -> f64 {
    let t = 2.0 * sigma_lx;
    1.0 / (4.0 + 4.0 * t * t)
}

/// Bound from the conservation-law inequality for an arbitrary input `ψ`:
/// `|⟨[S_z, S_x]⟩|² / (4σ(S_x)² + 4σ(L_x)²)`.
pub fn bound_for_input(psi: &QuantumState, sigma_lx: f64) -> Result<f64> {
    let sz = spin_component(Axis::Z);
    let sx = spin_component(Axis::X);
    let half = half_commutator_expectation(&sz, &sx, psi)?;
    let s = std_dev(&sx, psi)?;
    let denom = 4.0 * s * s + 4.0 * sigma_lx * sigma_lx;
    Ok(crate::measurement::Bound::ratio(4.0 * half * half, denom)
        .finite()
        .unwrap_or(f64::INFINITY))
}

/// Coherent field: `1/(4 + 16⟨N⟩)`.
pub fn bound_coherent(mean_n: f64) -> f64 {
    1.0 / (4.0 + 16.0 * mean_n)
}

/// Number state or any mixture of number states.
pub fn bound_number_state() -> f64 {
    bound_general(0.0)
}

/// `n` spins in an arbitrary (possibly entangled) state: `1/(4 + 4n²)`.
pub fn bound_entangled_spins(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::contract("spin bound needs n ≥ 1"));
    }
    let n = n as f64;
    Ok(1.0 / (4.0 + 4.0 * n * n))
}

/// `n` spins in a separable state: `1/(4 + 4n)`.
pub fn bound_separable_spins(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::contract("spin bound needs n ≥ 1"));
    }
    Ok(1.0 / (4.0 + 4.0 * n as f64))
}

/// Largest `σ(L_x)²` a separable `n`-spin state can reach: `n/4`.
pub fn separable_variance_cap(n: usize) -> f64 {
    n as f64 / 4.0
}

fn spin_register_dim(n: usize) -> Result<usize> {
    let dim = u32::try_from(n)
        .ok()
        .and_then(|n| 1usize.checked_shl(n))
        .filter(|&d| d > 0)
        .ok_or(Error::Resource {
            requested: usize::MAX,
            cap: DIM_CAP,
        })?;
    check_dim(dim, DIM_CAP)?;
    Ok(dim)
}

/// `Σ_j S_axis^(j)` on `n` spins.
pub fn spin_ensemble_total(axis: Axis, n: usize) -> Result<HermitianOperator> {
    if n == 0 {
        return Err(Error::contract("spin ensemble needs n ≥ 1"));
    }
    let dim = spin_register_dim(n)?;
    let s = spin_component(axis);
    let mut total = HermitianOperator::zero(dim);
    for site in 0..n {
        let left = 1usize << site;
        let right = 1usize << (n - site - 1);
        let embedded = s.embed_right(left)?.embed_left(right)?;
        total = total.try_add(&embedded)?;
    }
    Ok(total)
}

/// `L_x = Σ_j S_x^(j)` on `n` spins.
pub fn spin_ensemble_lx(n: usize) -> Result<HermitianOperator> {
    spin_ensemble_total(Axis::X, n)
}

/// `|s⟩^{⊗n}` with `s` the `±1/2` eigenstate of `S_axis`.
pub fn spin_product_state(n: usize, axis: Axis, up: bool) -> Result<QuantumState> {
    spin_register_dim(n)?;
    spin_state(axis, up).power(n)
}

/// `(|↑⟩^{⊗n} + |↓⟩^{⊗n})/√2` along `axis`; maximizes `σ(L_axis) = n/2`.
pub fn ghz_state(n: usize, axis: Axis) -> Result<QuantumState> {
    let up = spin_product_state(n, axis, true)?;
    let down = spin_product_state(n, axis, false)?;
    match (up, down) {
        (QuantumState::Pure(a), QuantumState::Pure(b)) => QuantumState::pure_normalized(a + b),
        _ => unreachable!("tensor powers of pure states are pure"),
    }
}

/// `N = diag(0, 1, …, cutoff)`.
pub fn number_operator(cutoff: usize) -> HermitianOperator {
    let diag: Vec<f64> = (0..=cutoff).map(|k| k as f64).collect();
    HermitianOperator::from_real_diagonal(&diag).expect("diagonal is Hermitian")
}

pub fn number_state(k: usize, cutoff: usize) -> Result<QuantumState> {
    QuantumState::basis(cutoff + 1, k)
}

/// `max(20, ⌈|α|² + 8|α| + 10⌉)`.
pub fn default_cutoff(alpha: num_complex::Complex64) -> usize {
    let a = alpha.norm();
    ((a * a + 8.0 * a + 10.0).ceil() as usize).max(20)
}

/// Largest tail weight tolerated before renormalizing a truncated state.
pub const TRUNCATION_TOL: f64 = 1e-10;

/// Coherent state `|α⟩` truncated at `cutoff` photons and renormalized.
pub fn coherent_state(alpha: num_complex::Complex64, cutoff: usize) -> Result<QuantumState> {
    let mut amps = CVector::from_element(cutoff + 1, ZERO);
    let mut term = ONE * (-alpha.norm_sqr() / 2.0).exp();
    amps[0] = term;
    for n in 1..=cutoff {
        term = term * alpha / (n as f64).sqrt();
        amps[n] = term;
    }
    let deficit = 1.0 - amps.norm_squared();
    if deficit > TRUNCATION_TOL {
        return Err(Error::Cutoff { cutoff, deficit });
    }
    QuantumState::pure_normalized(amps)
}

/// Thermal state with mean photon number `mean_n`, truncated and renormalized.
pub fn thermal_state(mean_n: f64, cutoff: usize) -> Result<QuantumState> {
    if !(mean_n >= 0.0 && mean_n.is_finite()) {
        return Err(Error::contract("mean photon number must be finite and ≥ 0"));
    }
    let ratio = mean_n / (1.0 + mean_n);
    let weights: Vec<f64> = (0..=cutoff)
        .map(|k| ratio.powi(k as i32) / (1.0 + mean_n))
        .collect();
    let total: f64 = weights.iter().sum();
    let deficit = 1.0 - total;
    if deficit > TRUNCATION_TOL {
        return Err(Error::Cutoff { cutoff, deficit });
    }
    QuantumState::diagonal(&weights.iter().map(|w| w / total).collect::<Vec<_>>())
}

/// One line of a bound comparison table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub label: String,
    pub parameter: f64,
    pub bound: f64,
    pub achieved: Option<f64>,
    pub slack: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn push(&mut self, label: &str, parameter: f64, bound: f64, achieved: Option<f64>) {
        self.rows.push(BoundRow {
            label: label.to_string(),
            parameter,
            bound,
            achieved,
            slack: achieved.map(|a| a - bound),
        });
    }

    /// Every row with an achieved value respects its bound.
    pub fn all_respected(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.slack.is_none_or(|s| s >= -RELATION_TOL))
    }

    /// CSV with columns `label,parameter,bound,achieved,slack`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "parameter", "bound", "achieved", "slack"])?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.label.clone(),
                format!("{:?}", r.parameter),
                format!("{:?}", r.bound),
                fmt(r.achieved),
                fmt(r.slack),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}
