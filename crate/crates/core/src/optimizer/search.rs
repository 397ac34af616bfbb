//! Randomized search for models that break `ε(A)η(B) ≥ ½|⟨[A,B]⟩|`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measurement::{
    check_heisenberg, check_uup, random_case, MeasurementModel, RelationCase, RelationReport,
};
use crate::qcore::{
    eigendecompose, matrix_exp_i, CMatrix, HermitianOperator, QuantumState, Tensor, UnitaryOperator,
};
use crate::random::{random_hermitian, random_pure_state, stream_rng};
use crate::{Error, Result};

/// An accepted violation must undercut the right-hand side by this much.
pub const VIOLATION_MARGIN: f64 = 1e-6;

/// Sampling family a trial was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    /// Haar-random interaction.
    Haar,
    /// `U = exp(itG)` with small `t`: little disturbance, sizeable noise.
    WeakCoupling,
    /// Von Neumann pointer coupling for `A`, slightly perturbed: little noise.
    NearProjective,
    /// Supplied by the caller.
    Stored,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exhibit {
    pub trial: Option<u64>,
    pub family: ModelFamily,
    pub case: RelationCase,
    pub heisenberg: RelationReport,
    pub uup: RelationReport,
}

/// Screen one case; `Some` when it violates the Heisenberg-type relation by
/// more than [`VIOLATION_MARGIN`].
pub fn screen_case(
    case: RelationCase,
    family: ModelFamily,
    trial: Option<u64>,
) -> Result<Option<Exhibit>> {
    let heisenberg = check_heisenberg(&case.model, &case.a, &case.b, &case.psi)?;
    if heisenberg.lhs >= heisenberg.rhs - VIOLATION_MARGIN {
        return Ok(None);
    }
    let uup = check_uup(&case.model, &case.a, &case.b, &case.psi)?;
    Ok(Some(Exhibit {
        trial,
        family,
        case,
        heisenberg,
        uup,
    }))
}

fn weak_coupling_case<R: Rng + ?Sized>(od: usize, ad: usize, rng: &mut R) -> Result<RelationCase> {
    let t = rng.random_range(0.0..0.3);
    let g = random_hermitian(od * ad, rng);
    let u = matrix_exp_i(&g.scaled(t))?;
    let model = MeasurementModel::new(
        od,
        ad,
        random_pure_state(ad, rng),
        u,
        random_hermitian(ad, rng),
    )?;
    Ok(RelationCase {
        model,
        a: random_hermitian(od, rng),
        b: random_hermitian(od, rng),
        psi: random_pure_state(od, rng),
    })
}

/// `U₀ = Σ_k |a_k⟩⟨a_k| ⊗ X^k` copies the eigenbasis of `A` into the pointer
/// basis of the apparatus (`X` the cyclic shift, `ξ = |0⟩`, `M = Σ a_k|k⟩⟨k|`),
/// then `U = U₀ exp(itG)` with small `t`.
fn near_projective_case<R: Rng + ?Sized>(
    od: usize,
    ad: usize,
    rng: &mut R,
) -> Result<RelationCase> {
    let a = random_hermitian(od, rng);
    let spectrum = eigendecompose(&a)?;
    let mut u0 = CMatrix::zeros(od * ad, od * ad);
    for k in 0..od {
        let v = spectrum.eigenvector(k);
        let projector = &v * v.adjoint();
        let perm: Vec<usize> = (0..ad).map(|j| (j + k) % ad).collect();
        let shift = UnitaryOperator::permutation(&perm)?;
        u0 += projector.kronecker(shift.matrix());
    }
    let mut meter_diag = vec![0.0; ad];
    meter_diag[..od].copy_from_slice(&spectrum.values.as_slice()[..od]);
    let t = rng.random_range(0.0..0.2);
    let kick = matrix_exp_i(&random_hermitian(od * ad, rng).scaled(t))?;
    let u = UnitaryOperator::new(u0 * kick.matrix())?;
    let model = MeasurementModel::new(
        od,
        ad,
        QuantumState::basis(ad, 0)?,
        u,
        HermitianOperator::from_real_diagonal(&meter_diag)?,
    )?;
    Ok(RelationCase {
        model,
        a,
        b: random_hermitian(od, rng),
        psi: random_pure_state(od, rng),
    })
}

fn draw_case(od: usize, ad: usize, seed: u64, trial: u64) -> Result<(ModelFamily, RelationCase)> {
    let mut rng = stream_rng(seed, trial);
    let families: &[ModelFamily] = if ad >= od {
        &[
            ModelFamily::Haar,
            ModelFamily::WeakCoupling,
            ModelFamily::NearProjective,
        ]
    } else {
        &[ModelFamily::Haar, ModelFamily::WeakCoupling]
    };
    let family = families[rng.random_range(0..families.len())];
    let case = match family {
        ModelFamily::Haar => random_case(od, ad, &mut rng)?,
        ModelFamily::WeakCoupling => weak_coupling_case(od, ad, &mut rng)?,
        ModelFamily::NearProjective => near_projective_case(od, ad, &mut rng)?,
        ModelFamily::Stored => unreachable!("stored cases are never sampled"),
    };
    Ok((family, case))
}

/// Sample `trials` models and keep those that violate the Heisenberg-type
/// relation, each with its universal-relation report.
pub fn violation_search(
    object_dim: usize,
    apparatus_dim: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<Exhibit>> {
    if object_dim < 2 || apparatus_dim < 2 {
        return Err(Error::contract("violation search needs dims ≥ 2"));
    }
    let found: Vec<Option<Exhibit>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (family, case) = draw_case(object_dim, apparatus_dim, seed, trial)?;
            screen_case(case, family, Some(trial))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Product input `ψ ⊗ ξ` of a case, for inspection.
pub fn joint_input(case: &RelationCase) -> Result<QuantumState> {
    case.psi.tensor(case.model.apparatus_state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::heisenberg_exhibit;

    #[test]
    fn stored_exhibit_is_caught() {
        let ex = screen_case(heisenberg_exhibit(), ModelFamily::Stored, None)
            .unwrap()
            .expect("projective model breaks the relation");
        assert!(ex.heisenberg.lhs < 1e-12);
        assert!((ex.heisenberg.rhs - 0.25).abs() < 1e-12);
        assert!(ex.uup.holds);
    }

    #[test]
    fn zero_trials_is_empty() {
        assert!(violation_search(2, 2, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn search_finds_exhibits_that_satisfy_uup() {
        let found = violation_search(2, 2, 400, 3).unwrap();
        assert!(!found.is_empty());
        for ex in &found {
            assert!(!ex.heisenberg.holds);
            assert!(ex.uup.holds, "{:?}", ex.uup);
        }
    }

    #[test]
    fn near_projective_family_has_small_noise() {
        let mut rng = stream_rng(9, 0);
        let case = near_projective_case(2, 3, &mut rng).unwrap();
        let eps = crate::measurement::noise(&case.model, &case.a, &case.psi).unwrap();
        let spread = crate::qcore::std_dev(&case.a, &case.psi).unwrap();
        assert!(eps < 0.5 * spread.max(1.0));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = violation_search(3, 2, 50, 17).unwrap();
        let b = violation_search(3, 2, 50, 17).unwrap();
        assert_eq!(a, b);
    }
}
