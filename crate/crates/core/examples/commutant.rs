//! Unitaries commuting with a conserved charge: block structure for
//! `S_x + L_x` with two spins, and the smaller set that also conserves
//! `S_y + L_y` and `S_z + L_z`.

use qmeasure::gates::{conserved_charges, spin_product_state, AncillaSpec, Conservation};
use qmeasure::optimizer::{commutant_basis, FeasibleSet};
use qmeasure::qcore::Axis;
use qmeasure::random::seeded_rng;

pub fn run() -> qmeasure::Result<(Vec<usize>, usize, usize, f64)> {
    let ancilla = AncillaSpec::spins(2, spin_product_state(2, Axis::Z, true)?, true)?;
    let x_only = conserved_charges(&ancilla, Conservation::X)?;
    let blocks = commutant_basis(&x_only[0])?;
    let full = FeasibleSet::for_charges(8, &conserved_charges(&ancilla, Conservation::Full)?)?;

    let u = full.build_unitary(&full.random_params(&mut seeded_rng(5)))?;
    let defect = qmeasure::gates::conservation_defect(&u, &ancilla, Conservation::Full)?;
    Ok((
        blocks.block_dims(),
        blocks.parameter_count(),
        full.parameter_count(),
        defect,
    ))
}

pub fn main() -> qmeasure::Result<()> {
    let (dims, x_params, full_params, defect) = run()?;
    println!("S_x + L_x eigenspace dims: {dims:?} ({x_params} real parameters)");
    println!("full rotation invariance: {full_params} real parameters");
    println!("defect of a random invariant unitary: {defect:.1e}");
    Ok(())
}
