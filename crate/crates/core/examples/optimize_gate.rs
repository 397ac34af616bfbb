//! Minimize Hadamard gate error over implementations that conserve
//! `S_x + L_x`, for a one-spin ancilla, first with its state fixed and then
//! optimizing the ancilla state as well.

use qmeasure::gates::{spin_product_state, AncillaSpec};
use qmeasure::optimizer::{minimize_gate_error, OptimizationResult, OptimizerConfig};
use qmeasure::qcore::Axis;

pub fn run() -> qmeasure::Result<(OptimizationResult, OptimizationResult)> {
    let ancilla = AncillaSpec::spins(1, spin_product_state(1, Axis::Z, true)?, true)?;
    let config = OptimizerConfig {
        starts: 8,
        seed: 3,
        ..Default::default()
    };
    let fixed = minimize_gate_error(&ancilla, &config)?;
    let joint = minimize_gate_error(
        &ancilla,
        &OptimizerConfig {
            optimize_ancilla: true,
            ..config
        },
    )?;
    Ok((fixed, joint))
}

pub fn main() -> qmeasure::Result<()> {
    let (fixed, joint) = run()?;
    for (name, r) in [("fixed ancilla", &fixed), ("joint", &joint)] {
        println!(
            "{name:>13}: P_e = {:.6}  bound = {:.6}  params = {}  converged = {}",
            r.best_value, r.analytic_bound, r.parameter_count, r.converged
        );
    }
    Ok(())
}
