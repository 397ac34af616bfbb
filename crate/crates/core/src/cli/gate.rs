use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{json_bytes, Produced};
use crate::gates::{
    bound_coherent, bound_entangled_spins, bound_for_input, bound_number_state,
    bound_separable_spins, coherent_state, default_cutoff, default_input, gate_error_probability,
    ghz_state, number_state, spin_product_state, thermal_state, AncillaSpec, BoundTable,
    Conservation, GateScenario,
};
use crate::measurement::RELATION_TOL;
use crate::optimizer::{
    minimize_gate_error, minimize_gate_error_for_input, OptimizationResult, OptimizerConfig,
};
use crate::qcore::{std_dev, Axis, QuantumState, UnitaryOperator};
use crate::{Error, Result};

/// Contract errors from user-supplied scenario data are usage errors.
fn as_usage(e: Error) -> Error {
    match e {
        Error::Contract(m) => Error::Usage(m),
        other => other,
    }
}

/// Which rows of the Hadamard bound table to produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsSpec {
    pub coherent_mean_n: Vec<f64>,
    /// Photon numbers `k` of number-state ancillas.
    pub number_states: Vec<usize>,
    pub entangled_spins: Vec<usize>,
    pub separable_spins: Vec<usize>,
    /// When set, each row is also optimized for its extremal ancilla state
    /// (GHZ along x for entangled spins, `|↑_z⟩^n` for separable ones).
    pub optimize: Option<OptimizerConfig>,
}

impl Default for BoundsSpec {
    fn default() -> Self {
        Self {
            coherent_mean_n: vec![0.0, 1.0, 4.0],
            number_states: vec![0, 1, 2],
            entangled_spins: vec![1, 2, 3],
            separable_spins: vec![1, 2, 3, 4],
            optimize: None,
        }
    }
}

fn coherent_ancilla(mean_n: f64) -> Result<AncillaSpec> {
    let alpha = Complex64::new(mean_n.sqrt(), 0.0);
    let cutoff = default_cutoff(alpha);
    AncillaSpec::boson(cutoff, coherent_state(alpha, cutoff)?)
}

fn number_ancilla(k: usize, cutoff: Option<usize>) -> Result<AncillaSpec> {
    let cutoff = cutoff.unwrap_or(k + 2);
    AncillaSpec::boson(cutoff, number_state(k, cutoff)?)
}

/// Analytic bound table, with optimized values when requested.
pub fn hadamard_bounds(spec: &BoundsSpec) -> Result<Produced> {
    if spec
        .coherent_mean_n
        .iter()
        .any(|n| !(n.is_finite() && *n >= 0.0))
    {
        return Err(Error::Usage(
            "coherent_mean_n entries must be finite and ≥ 0".into(),
        ));
    }
    let achieved = |ancilla: Result<AncillaSpec>| -> Result<Option<f64>> {
        match &spec.optimize {
            None => Ok(None),
            Some(config) => {
                let ancilla = ancilla.map_err(as_usage)?;
                Ok(Some(minimize_gate_error(&ancilla, config)?.best_value))
            }
        }
    };

    let mut table = BoundTable::default();
    for &k in &spec.number_states {
        table.push(
            "number_state",
            k as f64,
            bound_number_state(),
            achieved(number_ancilla(k, None))?,
        );
    }
    for &mean_n in &spec.coherent_mean_n {
        table.push(
            "coherent",
            mean_n,
            bound_coherent(mean_n),
            achieved(coherent_ancilla(mean_n))?,
        );
    }
    for &n in &spec.entangled_spins {
        let bound = bound_entangled_spins(n).map_err(as_usage)?;
        let ancilla = ghz_state(n, Axis::X).and_then(|s| AncillaSpec::spins(n, s, false));
        table.push("entangled_spins", n as f64, bound, achieved(ancilla)?);
    }
    for &n in &spec.separable_spins {
        let bound = bound_separable_spins(n).map_err(as_usage)?;
        let ancilla =
            spin_product_state(n, Axis::Z, true).and_then(|s| AncillaSpec::spins(n, s, true));
        table.push("separable_spins", n as f64, bound, achieved(ancilla)?);
    }

    let bad = table
        .rows
        .iter()
        .filter(|r| r.slack.is_some_and(|s| s < -RELATION_TOL))
        .count();
    Ok(Produced {
        summary: format!("hadamard_bounds: {} rows", table.rows.len()),
        violation: (bad > 0).then(|| format!("{bad} rows fall below their bound")),
        files: vec![(
            "hadamard_bounds.csv".into(),
            table.to_csv_string()?.into_bytes(),
        )],
    })
}

/// How a spin ancilla is prepared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinPreparation {
    /// `|↑_z⟩^{⊗n}`, separable with `σ(L_x)² = n/4`.
    Product,
    /// GHZ state along x, `σ(L_x) = n/2`.
    Ghz,
    Custom {
        state: QuantumState,
        separable: bool,
    },
}

/// Ancilla presets accepted in scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AncillaPreset {
    None,
    NumberState { k: usize, cutoff: Option<usize> },
    Coherent { mean_n: f64, cutoff: Option<usize> },
    Thermal { mean_n: f64, cutoff: usize },
    Field { cutoff: usize, state: QuantumState },
    Spins { n: usize, state: SpinPreparation },
}

impl AncillaPreset {
    pub fn build(&self) -> Result<AncillaSpec> {
        let spec = match self {
            AncillaPreset::None => Ok(AncillaSpec::None),
            AncillaPreset::NumberState { k, cutoff } => number_ancilla(*k, *cutoff),
            AncillaPreset::Coherent { mean_n, cutoff } => {
                if !(mean_n.is_finite() && *mean_n >= 0.0) {
                    return Err(Error::Usage("mean_n must be finite and ≥ 0".into()));
                }
                let alpha = Complex64::new(mean_n.sqrt(), 0.0);
                let cutoff = cutoff.unwrap_or_else(|| default_cutoff(alpha));
                coherent_state(alpha, cutoff).and_then(|s| AncillaSpec::boson(cutoff, s))
            }
            AncillaPreset::Thermal { mean_n, cutoff } => {
                thermal_state(*mean_n, *cutoff).and_then(|s| AncillaSpec::boson(*cutoff, s))
            }
            AncillaPreset::Field { cutoff, state } => AncillaSpec::boson(*cutoff, state.clone()),
            AncillaPreset::Spins { n, state } => match state {
                SpinPreparation::Product => spin_product_state(*n, Axis::Z, true)
                    .and_then(|s| AncillaSpec::spins(*n, s, true)),
                SpinPreparation::Ghz => {
                    ghz_state(*n, Axis::X).and_then(|s| AncillaSpec::spins(*n, s, false))
                }
                SpinPreparation::Custom { state, separable } => {
                    AncillaSpec::spins(*n, state.clone(), *separable)
                }
            },
        };
        spec.map_err(as_usage)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplementationSpec {
    /// Search the conserving unitaries.
    #[default]
    Optimize,
    /// Evaluate a given unitary on qubit ⊗ ancilla.
    Operator(UnitaryOperator),
}

/// Scenario file for `optimize`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub ancilla: AncillaPreset,
    pub implementation: ImplementationSpec,
    /// Qubit input; `(|0⟩ + i|1⟩)/√2` when absent.
    pub input_state: Option<QuantumState>,
    pub optimizer: OptimizerConfig,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self {
            ancilla: AncillaPreset::Spins {
                n: 1,
                state: SpinPreparation::Product,
            },
            implementation: ImplementationSpec::Optimize,
            input_state: None,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub ancilla: String,
    pub conservation: Conservation,
    pub sigma_lx: f64,
    pub analytic_bound: f64,
    pub error_probability: f64,
    pub slack: f64,
    /// Present when the implementation was optimized.
    pub result: Option<OptimizationResult>,
}

/// Evaluate a given implementation or optimize one.
pub fn optimize(scenario: &ScenarioFile) -> Result<Produced> {
    let report = run_optimize(scenario)?;
    let converged = report.result.as_ref().map(|r| r.converged);
    Ok(Produced {
        summary: format!(
            "optimize: {} P_e={} bound={} slack={:e}{}",
            report.ancilla,
            report.error_probability,
            report.analytic_bound,
            report.slack,
            match converged {
                Some(false) => " (not converged)",
                _ => "",
            }
        ),
        violation: (report.slack < -RELATION_TOL).then(|| {
            format!(
                "P_e {} below bound {}",
                report.error_probability, report.analytic_bound
            )
        }),
        files: vec![("optimize.json".into(), json_bytes(&report)?)],
    })
}

pub fn run_optimize(scenario: &ScenarioFile) -> Result<OptimizeReport> {
    let ancilla = scenario.ancilla.build()?;
    let psi = scenario.input_state.clone().unwrap_or_else(default_input);
    if psi.dim() != 2 {
        return Err(Error::Usage("input_state must be a qubit state".into()));
    }
    let conservation = scenario.optimizer.conservation;
    let bound_for = |state: &QuantumState| -> Result<f64> {
        match conservation {
            Conservation::None => Ok(0.0),
            _ => bound_for_input(&psi, std_dev(&ancilla.lx()?, state)?),
        }
    };
    match &scenario.implementation {
        ImplementationSpec::Operator(u) => {
            let s = GateScenario::with_conservation(ancilla.clone(), u.clone(), conservation)
                .map_err(as_usage)?;
            let pe = gate_error_probability(&s, &psi)?;
            let bound = bound_for(&ancilla.state())?;
            Ok(OptimizeReport {
                ancilla: ancilla.label(),
                conservation,
                sigma_lx: ancilla.sigma_lx()?,
                analytic_bound: bound,
                error_probability: pe,
                slack: pe - bound,
                result: None,
            })
        }
        ImplementationSpec::Optimize => {
            let r = minimize_gate_error_for_input(&ancilla, &psi, &scenario.optimizer)
                .map_err(as_usage)?;
            Ok(OptimizeReport {
                ancilla: ancilla.label(),
                conservation,
                sigma_lx: std_dev(&ancilla.lx()?, &r.ancilla_state)?,
                analytic_bound: r.analytic_bound,
                error_probability: r.best_value,
                slack: r.best_value - r.analytic_bound,
                result: Some(r),
            })
        }
    }
}
