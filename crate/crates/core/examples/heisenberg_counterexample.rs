//! A projective S_z probe that leaves no noise but disturbs S_x, breaking
//! `ε(A)η(B) ≥ ½|⟨[A,B]⟩|` while the universal relation still holds.

use qmeasure::measurement::{check_heisenberg, check_uup, heisenberg_exhibit, RelationReport};

pub fn run() -> qmeasure::Result<(RelationReport, RelationReport)> {
    let case = heisenberg_exhibit();
    let heisenberg = check_heisenberg(&case.model, &case.a, &case.b, &case.psi)?;
    let uup = check_uup(&case.model, &case.a, &case.b, &case.psi)?;
    Ok((heisenberg, uup))
}

pub fn main() -> qmeasure::Result<()> {
    let (heisenberg, uup) = run()?;
    for r in [&heisenberg, &uup] {
        println!(
            "{:>10}: lhs={:.6} rhs={:.6} holds={}",
            r.relation, r.lhs, r.rhs, r.holds
        );
    }
    println!(
        "ε = {:.3e}, η = {:.6}",
        heisenberg.components["epsilon"], heisenberg.components["eta"]
    );
    Ok(())
}
