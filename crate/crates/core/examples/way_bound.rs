//! The conservation-law lower bound on measurement noise, on a random model
//! that conserves `L₁ + L₂`, and the diagnostic for one that breaks the
//! Yanase condition.

use qmeasure::conservation::{random_conserving_case, verify_way, ConservedCharge, WayReport};
use qmeasure::measurement::MeasurementModel;
use qmeasure::qcore::{spin_component, spin_state, Axis, UnitaryOperator};
use qmeasure::random::seeded_rng;
use qmeasure::Error;

pub fn run() -> qmeasure::Result<(WayReport, Error)> {
    let case = random_conserving_case(3, 3, &mut seeded_rng(1))?;
    let report = verify_way(&case.model, &case.a, &case.charge, &case.psi)?;

    // Meter S_x does not commute with the apparatus charge S_z.
    let bad = MeasurementModel::new(
        2,
        2,
        spin_state(Axis::Z, true),
        UnitaryOperator::identity(4),
        spin_component(Axis::X),
    )?;
    let charge = ConservedCharge::new(spin_component(Axis::Z), spin_component(Axis::Z));
    let err = verify_way(
        &bad,
        &spin_component(Axis::Z),
        &charge,
        &spin_state(Axis::Y, true),
    )
    .expect_err("Yanase condition fails");
    Ok((report, err))
}

pub fn main() -> qmeasure::Result<()> {
    let (report, err) = run()?;
    println!(
        "ε² = {:.6}, bound = {:.6}, holds = {}",
        report.report.lhs, report.report.rhs, report.report.holds
    );
    println!(
        "‖[U, L]‖ = {:.1e}, ‖[M, L₂]‖ = {:.1e}",
        report.conservation_norm, report.yanase_norm
    );
    println!("η(L₁+L₂) = {:.1e}", report.total_disturbance);
    println!("rejected: {err}");
    Ok(())
}
