//! Coherent field ancilla: photon statistics in a truncated Fock space and
//! the gate-error bound `1/(4 + 16⟨N⟩)` it implies.

use num_complex::Complex64;
use qmeasure::gates::{bound_coherent, coherent_state, default_cutoff, number_operator};
use qmeasure::qcore::{expectation, variance};

/// `(⟨N⟩, σ(N)², bound)` for each `|α|²`.
pub fn run() -> qmeasure::Result<Vec<(f64, f64, f64)>> {
    [0.5_f64, 2.0, 8.0]
        .iter()
        .map(|&mean| {
            let alpha = Complex64::new(mean.sqrt(), 0.0);
            let cutoff = default_cutoff(alpha);
            let xi = coherent_state(alpha, cutoff)?;
            let n = number_operator(cutoff);
            let m = expectation(&n, &xi)?;
            Ok((m, variance(&n, &xi)?, bound_coherent(m)))
        })
        .collect()
}

pub fn main() -> qmeasure::Result<()> {
    for (mean, var, bound) in run()? {
        println!("<N> = {mean:.6}  var(N) = {var:.6}  P_e >= {bound:.6}");
    }
    Ok(())
}
