//! Random search for models that break the Heisenberg-type relation. Every
//! hit still satisfies the universal relation.

use qmeasure::optimizer::{violation_search, Exhibit};

pub fn run() -> qmeasure::Result<Vec<Exhibit>> {
    violation_search(2, 2, 2000, 42)
}

pub fn main() -> qmeasure::Result<()> {
    let found = run()?;
    println!("{} violations in 2000 trials", found.len());
    if let Some(worst) = found
        .iter()
        .min_by(|a, b| a.heisenberg.slack.total_cmp(&b.heisenberg.slack))
    {
        println!(
            "largest: εη = {:.4} < {:.4} ({:?}), universal lhs = {:.4}",
            worst.heisenberg.lhs, worst.heisenberg.rhs, worst.family, worst.uup.lhs
        );
    }
    Ok(())
}
