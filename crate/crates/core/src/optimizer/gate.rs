use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::commutant::FeasibleSet;
use super::descent::{minimize, DescentSettings};
use crate::gates::{
    bound_for_input, conservation_defect, conserved_charges, default_input, AncillaSpec,
    Conservation, CONSERVATION_TOL,
};
use crate::qcore::{
    spin_component, std_dev, Axis, CMatrix, CVector, QuantumState, Tensor, UnitaryOperator,
};
use crate::random::{stream_rng, SeededRng};
use crate::{Error, Result};

/// Allowed shortfall of an optimized value below its analytic bound.
pub const BOUND_CHECK_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub seed: u64,
    /// Alternate unitary descent with descent over pure ancilla states.
    pub optimize_ancilla: bool,
    /// Alternation rounds when `optimize_ancilla` is set.
    pub ancilla_rounds: usize,
    pub conservation: Conservation,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            max_iters: 2000,
            grad_tol: 1e-8,
            seed: 0,
            optimize_ancilla: false,
            ancilla_rounds: 4,
            conservation: Conservation::X,
            jobs: None,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::Usage("optimizer needs at least one start".into()));
        }
        if !(self.grad_tol.is_finite() && self.grad_tol >= 0.0) {
            return Err(Error::Usage(
                "grad_tol must be finite and non-negative".into(),
            ));
        }
        if self.optimize_ancilla && self.ancilla_rounds == 0 {
            return Err(Error::Usage("ancilla_rounds must be ≥ 1".into()));
        }
        Ok(())
    }

    fn descent(&self) -> DescentSettings {
        DescentSettings {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            ..DescentSettings::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_unitary: UnitaryOperator,
    pub best_value: f64,
    pub best_params: Vec<f64>,
    /// Ancilla state at the optimum (differs from the input only with `optimize_ancilla`).
    pub ancilla_state: QuantumState,
    /// Analytic lower bound for the optimum's ancilla state and input.
    pub analytic_bound: f64,
    pub starts: usize,
    pub start_values: Vec<f64>,
    pub iterations_total: usize,
    pub converged: bool,
    pub seed: u64,
    pub parameter_count: usize,
}

/// Vectorized `P_e = Σ_k p_k ‖(U†(S_x⊗1)U − S_z⊗1) φ_k‖²` over the pure
/// components `φ_k = ψ ⊗ ξ_k` of the joint input.
#[derive(Clone, Debug)]
pub struct GateObjective {
    sx: CMatrix,
    components: Vec<(f64, CVector, CVector)>,
}

impl GateObjective {
    pub fn new(psi: &QuantumState, ancilla_state: &QuantumState) -> Result<Self> {
        if psi.dim() != 2 {
            return Err(Error::contract("gate input must be a qubit state"));
        }
        let d = ancilla_state.dim();
        let sx = spin_component(Axis::X).embed_left(d)?.into_matrix();
        let sz = spin_component(Axis::Z).embed_left(d)?.into_matrix();
        let mut components = Vec::new();
        for (p, q) in psi.ensemble()? {
            for (w, a) in ancilla_state.ensemble()? {
                let phi = q.kronecker(&a);
                let target = &sz * &phi;
                components.push((p * w, phi, target));
            }
        }
        Ok(Self { sx, components })
    }

    pub fn value(&self, u: &UnitaryOperator) -> f64 {
        let m = u.matrix();
        let m_dag = m.adjoint();
        self.components
            .iter()
            .map(|(p, phi, target)| {
                let out = &m_dag * (&self.sx * (m * phi)) - target;
                p * out.norm_squared()
            })
            .sum()
    }
}

/// How the ancilla state is parametrized during joint optimization.
enum AncillaParams {
    /// Free pure state: `2d` reals, normalized.
    Free { dim: usize },
    /// Product of `n` spin-1/2 states: `4n` reals.
    Product { n: usize },
}

impl AncillaParams {
    fn for_spec(spec: &AncillaSpec) -> Self {
        match spec {
            AncillaSpec::Spins {
                n, separable: true, ..
            } => AncillaParams::Product { n: *n },
            other => AncillaParams::Free { dim: other.dim() },
        }
    }

    fn state(&self, params: &[f64]) -> Option<QuantumState> {
        let vec_of = |chunk: &[f64]| {
            let k = chunk.len() / 2;
            CVector::from_iterator(
                k,
                (0..k).map(|i| num_complex::Complex64::new(chunk[2 * i], chunk[2 * i + 1])),
            )
        };
        match self {
            AncillaParams::Free { .. } => QuantumState::pure_normalized(vec_of(params)).ok(),
            AncillaParams::Product { n } => {
                let mut out: Option<QuantumState> = None;
                for site in 0..*n {
                    let s = QuantumState::pure_normalized(vec_of(&params[4 * site..4 * site + 4]))
                        .ok()?;
                    out = Some(match out {
                        None => s,
                        Some(acc) => acc.tensor(&s).ok()?,
                    });
                }
                out
            }
        }
    }

    fn initial(
        &self,
        state: &QuantumState,
        rng: &mut SeededRng,
        randomize: bool,
    ) -> Result<Vec<f64>> {
        use rand_distr::{Distribution, StandardNormal};
        match self {
            AncillaParams::Free { dim } if !randomize => {
                let v = match state {
                    QuantumState::Pure(v) => v.clone(),
                    QuantumState::Mixed(_) => {
                        let ens = state.ensemble()?;
                        ens.into_iter()
                            .max_by(|a, b| a.0.total_cmp(&b.0))
                            .map(|(_, v)| v)
                            .ok_or_else(|| Error::Numerical("empty ensemble".into()))?
                    }
                };
                debug_assert_eq!(v.len(), *dim);
                Ok(v.iter().flat_map(|z| [z.re, z.im]).collect())
            }
            AncillaParams::Free { dim } => {
                Ok((0..2 * dim).map(|_| StandardNormal.sample(rng)).collect())
            }
            AncillaParams::Product { n } => {
                Ok((0..4 * n).map(|_| StandardNormal.sample(rng)).collect())
            }
        }
    }
}

struct StartOutcome {
    params: Vec<f64>,
    ancilla_state: QuantumState,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn run_start(
    start: usize,
    feasible: &FeasibleSet,
    ancilla: &AncillaSpec,
    psi: &QuantumState,
    config: &OptimizerConfig,
) -> Result<StartOutcome> {
    let mut rng = stream_rng(config.seed, start as u64);
    let settings = config.descent();
    let mut params = feasible.random_params(&mut rng);
    let unitary_objective = |state: &QuantumState| -> Result<_> {
        let objective = GateObjective::new(psi, state)?;
        Ok(move |p: &[f64]| match feasible.build_unitary(p) {
            Ok(u) => objective.value(&u),
            Err(_) => f64::INFINITY,
        })
    };

    if !config.optimize_ancilla {
        let state = ancilla.state();
        let outcome = minimize(unitary_objective(&state)?, &params, &settings);
        return Ok(StartOutcome {
            params: outcome.x,
            ancilla_state: state,
            value: outcome.value,
            iterations: outcome.iterations,
            converged: outcome.converged,
        });
    }

    let layout = AncillaParams::for_spec(ancilla);
    let mut ancilla_params = layout.initial(
        &ancilla.state(),
        &mut rng,
        start > 0 || matches!(layout, AncillaParams::Product { .. }),
    )?;
    let mut state = layout
        .state(&ancilla_params)
        .ok_or_else(|| Error::Numerical("degenerate initial ancilla state".into()))?;
    let mut iterations = 0;
    let mut value = f64::INFINITY;
    let mut converged = false;
    for _ in 0..config.ancilla_rounds {
        let u_out = minimize(unitary_objective(&state)?, &params, &settings);
        params = u_out.x;
        iterations += u_out.iterations;
        let u = feasible.build_unitary(&params)?;
        let ancilla_objective = |a: &[f64]| match layout.state(a) {
            Some(s) => GateObjective::new(psi, &s).map_or(f64::INFINITY, |o| o.value(&u)),
            None => f64::INFINITY,
        };
        let a_out = minimize(ancilla_objective, &ancilla_params, &settings);
        ancilla_params = a_out.x;
        iterations += a_out.iterations;
        state = layout
            .state(&ancilla_params)
            .ok_or_else(|| Error::Numerical("ancilla state collapsed to zero".into()))?;
        value = a_out.value;
        converged = u_out.converged && a_out.converged;
    }
    Ok(StartOutcome {
        params,
        ancilla_state: state,
        value,
        iterations,
        converged,
    })
}

/// Minimize `P_e` for the default input `(|0⟩ + i|1⟩)/√2`.
pub fn minimize_gate_error(
    ancilla: &AncillaSpec,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    minimize_gate_error_for_input(ancilla, &default_input(), config)
}

/// Multi-start minimization of the gate error over implementations that
/// satisfy `config.conservation`. Start `k` draws from stream `k` of
/// `config.seed`, so adding starts never worsens the result.
pub fn minimize_gate_error_for_input(
    ancilla: &AncillaSpec,
    psi: &QuantumState,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    let charges = conserved_charges(ancilla, config.conservation)?;
    let feasible = FeasibleSet::for_charges(2 * ancilla.dim(), &charges)?;

    let run_all = || {
        (0..config.starts)
            .into_par_iter()
            .map(|s| run_start(s, &feasible, ancilla, psi, config))
            .collect::<Result<Vec<_>>>()
    };
    let outcomes = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?
            .install(run_all)?,
        None => run_all()?,
    };

    let (best_idx, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .expect("at least one start");
    let best_unitary = feasible.build_unitary(&best.params)?;

    let defect = conservation_defect(&best_unitary, ancilla, config.conservation)?;
    if defect > CONSERVATION_TOL {
        return Err(Error::Numerical(format!(
            "optimized unitary drifted off the conserving set: {defect:e}"
        )));
    }

    let analytic_bound = match config.conservation {
        Conservation::None => 0.0,
        _ => {
            let sigma = std_dev(&ancilla.lx()?, &best.ancilla_state)?;
            bound_for_input(psi, sigma)?
        }
    };
    if best.value < analytic_bound - BOUND_CHECK_TOL {
        return Err(Error::BoundViolation(format!(
            "optimized P_e {} below analytic bound {analytic_bound} (start {best_idx})",
            best.value
        )));
    }

    Ok(OptimizationResult {
        best_value: best.value,
        best_params: best.params.clone(),
        ancilla_state: best.ancilla_state.clone(),
        best_unitary,
        analytic_bound,
        starts: config.starts,
        start_values: outcomes.iter().map(|o| o.value).collect(),
        iterations_total: outcomes.iter().map(|o| o.iterations).sum(),
        converged: outcomes.iter().any(|o| o.converged),
        seed: config.seed,
        parameter_count: feasible.parameter_count(),
    })
}
