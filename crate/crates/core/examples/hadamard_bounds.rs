//! Lower bounds on Hadamard gate error for field and spin ancillas, as CSV.

use qmeasure::gates::{
    bound_coherent, bound_entangled_spins, bound_number_state, bound_separable_spins, BoundTable,
};

pub fn run() -> qmeasure::Result<BoundTable> {
    let mut table = BoundTable::default();
    table.push("number_state", 0.0, bound_number_state(), None);
    for mean_n in [0.0, 1.0, 4.0, 100.0] {
        table.push("coherent", mean_n, bound_coherent(mean_n), None);
    }
    for n in 1..=4 {
        table.push("entangled_spins", n as f64, bound_entangled_spins(n)?, None);
        table.push("separable_spins", n as f64, bound_separable_spins(n)?, None);
    }
    Ok(table)
}

pub fn main() -> qmeasure::Result<()> {
    print!("{}", run()?.to_csv_string()?);
    Ok(())
}
