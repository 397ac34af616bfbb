//! Exact parametrizations of unitaries that commute with conserved charges.
//!
//! For a single charge `C = Σ_λ λ P_λ` every commuting unitary is
//! block-diagonal in the eigenbasis of `C`, one free `U(k)` per eigenspace.
//! [`CommutantParametrization`] stores those eigenspaces and maps `Σ k²` real
//! parameters to `⊕ exp(iH_λ)`. Several non-commuting charges (full rotational
//! invariance) do not share an eigenbasis; [`CommutantAlgebra`] handles them
//! through a real basis of the Hermitian commutant.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::qcore::{
    commutator, eigendecompose, matrix_exp_i, CMatrix, HermitianOperator, UnitaryOperator, ZERO,
};
use crate::random::{haar_unitary, random_hermitian};
use crate::{Error, Result};

/// Gap, on the spectrum rescaled to `[-1, 1]`, below which eigenvalues merge.
pub const CLUSTER_TOL: f64 = 1e-8;

/// One eigenspace of the charge.
#[derive(Clone, Debug, Serialize)]
pub struct CommutantBlock {
    /// Mean eigenvalue of the cluster.
    pub eigenvalue: f64,
    /// Orthonormal basis as the columns of a `dim × block_dim` matrix.
    #[serde(skip)]
    pub basis: CMatrix,
}

impl CommutantBlock {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutantParametrization {
    #[serde(skip)]
    charge: HermitianOperator,
    blocks: Vec<CommutantBlock>,
    parameter_count: usize,
}

/// Cluster the charge's eigenvalues and keep one block per cluster.
pub fn commutant_basis(charge: &HermitianOperator) -> Result<CommutantParametrization> {
    let spectrum = eigendecompose(charge)?;
    let values = spectrum.values.as_slice();
    let (lo, hi) = (values[0], values[values.len() - 1]);
    let range = hi - lo;
    let normalized = |v: f64| {
        if range > 0.0 {
            2.0 * (v - lo) / range - 1.0
        } else {
            0.0
        }
    };

    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for k in 1..values.len() {
        if normalized(values[k]) - normalized(values[k - 1]) > CLUSTER_TOL {
            clusters.push(Vec::new());
        }
        clusters.last_mut().expect("non-empty").push(k);
    }

    let blocks: Vec<CommutantBlock> = clusters
        .into_iter()
        .map(|idx| {
            let mut basis = CMatrix::zeros(charge.dim(), idx.len());
            for (c, &k) in idx.iter().enumerate() {
                basis.set_column(c, &spectrum.vectors.column(k));
            }
            let eigenvalue = idx.iter().map(|&k| values[k]).sum::<f64>() / idx.len() as f64;
            CommutantBlock { eigenvalue, basis }
        })
        .collect();
    let parameter_count = blocks.iter().map(|b| b.dim() * b.dim()).sum();
    Ok(CommutantParametrization {
        charge: charge.clone(),
        blocks,
        parameter_count,
    })
}

/// `k × k` Hermitian matrix from `k²` reals: the diagonal first, then
/// `(re, im)` pairs for the strict upper triangle in row order.
pub fn hermitian_from_params(k: usize, params: &[f64]) -> Result<HermitianOperator> {
    if params.len() != k * k {
        return Err(Error::contract(format!(
            "block of dim {k} needs {} parameters, got {}",
            k * k,
            params.len()
        )));
    }
    let mut h = CMatrix::from_element(k, k, ZERO);
    for i in 0..k {
        h[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut cursor = k;
    for i in 0..k {
        for j in (i + 1)..k {
            let z = Complex64::new(params[cursor], params[cursor + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            cursor += 2;
        }
    }
    HermitianOperator::new(h)
}

impl CommutantParametrization {
    pub fn charge(&self) -> &HermitianOperator {
        &self.charge
    }

    pub fn blocks(&self) -> &[CommutantBlock] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(CommutantBlock::dim).collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    pub fn dim(&self) -> usize {
        self.charge.dim()
    }

    /// `Σ_b V_b X_b V_b†` for per-block matrices `X_b`.
    pub fn assemble(&self, block_matrices: &[CMatrix]) -> Result<CMatrix> {
        if block_matrices.len() != self.blocks.len() {
            return Err(Error::contract("one matrix per block required"));
        }
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (block, x) in self.blocks.iter().zip(block_matrices) {
            if x.nrows() != block.dim() || x.ncols() != block.dim() {
                return Err(Error::contract("block matrix has wrong shape"));
            }
            out += &block.basis * x * block.basis.adjoint();
        }
        Ok(out)
    }

    /// `V_b† X V_b`, the restriction of `X` to block `b`.
    pub fn restrict(&self, x: &CMatrix, block: usize) -> CMatrix {
        let v = &self.blocks[block].basis;
        v.adjoint() * x * v
    }

    /// Block-diagonal unitary `⊕ exp(iH_b)` rotated back to the original basis.
    pub fn build_unitary(&self, params: &[f64]) -> Result<UnitaryOperator> {
        if params.len() != self.parameter_count {
            return Err(Error::contract(format!(
                "expected {} parameters, got {}",
                self.parameter_count,
                params.len()
            )));
        }
        let mut cursor = 0;
        let mut exps = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let k = block.dim();
            let h = hermitian_from_params(k, &params[cursor..cursor + k * k])?;
            exps.push(matrix_exp_i(&h)?.into_matrix());
            cursor += k * k;
        }
        UnitaryOperator::new(self.assemble(&exps)?)
    }

    /// Haar-random unitary in every block.
    pub fn sample_unitary<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<UnitaryOperator> {
        let blocks: Vec<CMatrix> = self
            .blocks
            .iter()
            .map(|b| haar_unitary(b.dim(), rng).into_matrix())
            .collect();
        UnitaryOperator::new(self.assemble(&blocks)?)
    }

    /// Random Hermitian operator commuting with the charge.
    pub fn sample_hermitian<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HermitianOperator> {
        let blocks: Vec<CMatrix> = self
            .blocks
            .iter()
            .map(|b| random_hermitian(b.dim(), rng).into_matrix())
            .collect();
        HermitianOperator::hermitian_part(&self.assemble(&blocks)?)
    }
}

/// Real basis of the Hermitian operators commuting with every generator.
#[derive(Clone, Debug)]
pub struct CommutantAlgebra {
    dim: usize,
    basis: Vec<HermitianOperator>,
}

/// Null space of `X ↦ ([X, G_1], …, [X, G_r])` restricted to Hermitian `X`.
pub fn commutant_algebra(generators: &[HermitianOperator]) -> Result<CommutantAlgebra> {
    let dim = generators
        .first()
        .map(HermitianOperator::dim)
        .ok_or_else(|| Error::contract("commutant of an empty generator set"))?;
    if generators.iter().any(|g| g.dim() != dim) {
        return Err(Error::contract("generators have different dims"));
    }

    let coords = dim * dim;
    let unit = |k: usize| {
        let mut p = vec![0.0; coords];
        p[k] = 1.0;
        hermitian_from_params(dim, &p).expect("coordinate basis")
    };
    let elements: Vec<HermitianOperator> = (0..coords).map(unit).collect();

    let rows = generators.len() * 2 * coords;
    let mut lin = DMatrix::<f64>::zeros(rows, coords);
    for (col, e) in elements.iter().enumerate() {
        let mut r = 0;
        for g in generators {
            let c = commutator(e, g)?;
            for z in c.iter() {
                lin[(r, col)] = z.re;
                lin[(r + 1, col)] = z.im;
                r += 2;
            }
        }
    }
    let gram = lin.transpose() * &lin;
    let eig = SymmetricEigen::try_new(gram, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("commutant null-space solve did not converge".into()))?;
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let mut basis = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= 1e-10 * scale {
            let x: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            basis.push(hermitian_from_params(dim, &x)?);
        }
    }
    Ok(CommutantAlgebra { dim, basis })
}

impl CommutantAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parameter_count(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HermitianOperator] {
        &self.basis
    }

    /// `exp(i Σ_k θ_k H_k)`.
    pub fn build_unitary(&self, params: &[f64]) -> Result<UnitaryOperator> {
        if params.len() != self.basis.len() {
            return Err(Error::contract(format!(
                "expected {} parameters, got {}",
                self.basis.len(),
                params.len()
            )));
        }
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for (theta, b) in params.iter().zip(&self.basis) {
            h += b.matrix().scale(*theta);
        }
        matrix_exp_i(&HermitianOperator::hermitian_part(&h)?)
    }
}

/// Unitaries allowed by a conservation constraint, with a real parametrization.
#[derive(Clone, Debug)]
pub enum FeasibleSet {
    Blocks(CommutantParametrization),
    Algebra(CommutantAlgebra),
}

impl FeasibleSet {
    /// Commutant of a list of charges; an empty list means no constraint.
    pub fn for_charges(dim: usize, charges: &[HermitianOperator]) -> Result<Self> {
        match charges {
            [] => Ok(FeasibleSet::Blocks(commutant_basis(
                &HermitianOperator::identity(dim),
            )?)),
            [single] => Ok(FeasibleSet::Blocks(commutant_basis(single)?)),
            many => Ok(FeasibleSet::Algebra(commutant_algebra(many)?)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Blocks(p) => p.dim(),
            FeasibleSet::Algebra(a) => a.dim(),
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self {
            FeasibleSet::Blocks(p) => p.parameter_count(),
            FeasibleSet::Algebra(a) => a.parameter_count(),
        }
    }

    pub fn build_unitary(&self, params: &[f64]) -> Result<UnitaryOperator> {
        match self {
            FeasibleSet::Blocks(p) => p.build_unitary(params),
            FeasibleSet::Algebra(a) => a.build_unitary(params),
        }
    }

    /// Starting point drawn uniformly from `[-π, π]` per parameter.
    pub fn random_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        use std::f64::consts::PI;
        (0..self.parameter_count())
            .map(|_| rng.random_range(-PI..PI))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{spin_component, Axis};
    use crate::random::seeded_rng;

    fn two_spin_charge() -> HermitianOperator {
        let sx = spin_component(Axis::X);
        sx.embed_left(2)
            .unwrap()
            .try_add(&sx.embed_right(2).unwrap())
            .unwrap()
    }

    #[test]
    fn lone_qubit_only_admits_phases() {
        let p = commutant_basis(&spin_component(Axis::X)).unwrap();
        assert_eq!(p.block_dims(), vec![1, 1]);
        assert_eq!(p.parameter_count(), 2);
    }

    #[test]
    fn two_spin_blocks() {
        let p = commutant_basis(&two_spin_charge()).unwrap();
        assert_eq!(p.block_dims(), vec![1, 2, 1]);
        assert_eq!(p.parameter_count(), 6);
        let eigs: Vec<f64> = p.blocks().iter().map(|b| b.eigenvalue).collect();
        for (v, e) in eigs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_charge_is_unconstrained() {
        let p = commutant_basis(&HermitianOperator::identity(4)).unwrap();
        assert_eq!(p.block_dims(), vec![4]);
        assert_eq!(p.parameter_count(), 16);
    }

    #[test]
    fn blocks_are_orthonormal_and_complete() {
        let p = commutant_basis(&two_spin_charge()).unwrap();
        let mut projector = CMatrix::zeros(4, 4);
        for b in p.blocks() {
            let gram = b.basis.adjoint() * &b.basis;
            assert!((gram - CMatrix::identity(b.dim(), b.dim())).norm() < 1e-12);
            projector += &b.basis * b.basis.adjoint();
        }
        assert!((projector - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn zero_params_give_identity() {
        let p = commutant_basis(&two_spin_charge()).unwrap();
        let u = p.build_unitary(&[0.0; 6]).unwrap();
        assert!((u.matrix() - CMatrix::identity(4, 4)).norm() < 1e-12);
        assert!(p.build_unitary(&[0.0; 5]).is_err());
    }

    #[test]
    fn built_unitaries_commute_with_charge() {
        let charge = two_spin_charge();
        let p = commutant_basis(&charge).unwrap();
        let mut rng = seeded_rng(8);
        for _ in 0..20 {
            let params: Vec<f64> = (0..6).map(|_| rng.random_range(-5.0..5.0)).collect();
            let u = p.build_unitary(&params).unwrap();
            assert!(commutator(&u, &charge).unwrap().norm() < 1e-9);
            let v = p.sample_unitary(&mut rng).unwrap();
            assert!(commutator(&v, &charge).unwrap().norm() < 1e-9);
            let h = p.sample_hermitian(&mut rng).unwrap();
            assert!(commutator(&h, &charge).unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn block_logs_recover_params() {
        // For a block E = exp(iH) with ‖H‖ < π/2, sin H = (E − E†)/2i is
        // Hermitian with the eigenvectors of H, and the phases of ⟨v|E|v⟩
        // recover the eigenvalues of H.
        let p = commutant_basis(&two_spin_charge()).unwrap();
        let params = [0.3, -0.2, 0.4, 0.1, -0.25, 0.5];
        let u = p.build_unitary(&params).unwrap();
        let mut recovered = Vec::new();
        for b in 0..p.blocks().len() {
            let e = p.restrict(u.matrix(), b);
            let sin_h = (&e - e.adjoint()) * Complex64::new(0.0, -0.5);
            let spec = eigendecompose(&HermitianOperator::hermitian_part(&sin_h).unwrap()).unwrap();
            let k = e.nrows();
            let mut h = CMatrix::zeros(k, k);
            for j in 0..k {
                let v = spec.eigenvector(j);
                let phase = v.dotc(&(&e * &v)).arg();
                h += (&v * v.adjoint()).scale(phase);
            }
            let mut block_params = vec![0.0; k * k];
            for i in 0..k {
                block_params[i] = h[(i, i)].re;
            }
            let mut c = k;
            for i in 0..k {
                for j in (i + 1)..k {
                    block_params[c] = h[(i, j)].re;
                    block_params[c + 1] = h[(i, j)].im;
                    c += 2;
                }
            }
            recovered.extend(block_params);
        }
        for (r, e) in recovered.iter().zip(params) {
            assert!((r - e).abs() < 1e-10, "{r} vs {e}");
        }
    }

    #[test]
    fn clustering_tolerates_round_off() {
        let charge =
            HermitianOperator::from_real_diagonal(&[0.0, 1e-12, 1.0, 2.0 - 1e-11]).unwrap();
        let p = commutant_basis(&charge).unwrap();
        assert_eq!(p.block_dims(), vec![2, 1, 1]);
    }

    #[test]
    fn algebra_of_single_charge_matches_blocks() {
        let charge = two_spin_charge();
        let a = commutant_algebra(std::slice::from_ref(&charge)).unwrap();
        assert_eq!(a.parameter_count(), 6);
    }

    #[test]
    fn rotation_commutant_of_two_spins() {
        // Two spins decompose as singlet ⊕ triplet; SU(2)-invariant Hermitian
        // operators are spanned by the two projectors.
        let gens: Vec<HermitianOperator> = Axis::ALL
            .iter()
            .map(|&ax| {
                let s = spin_component(ax);
                s.embed_left(2)
                    .unwrap()
                    .try_add(&s.embed_right(2).unwrap())
                    .unwrap()
            })
            .collect();
        let a = commutant_algebra(&gens).unwrap();
        assert_eq!(a.parameter_count(), 2);
        let mut rng = seeded_rng(2);
        let params: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
        let u = a.build_unitary(&params).unwrap();
        for g in &gens {
            assert!(commutator(&u, g).unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn feasible_set_dispatch() {
        let f = FeasibleSet::for_charges(4, &[]).unwrap();
        assert_eq!(f.parameter_count(), 16);
        let f = FeasibleSet::for_charges(4, &[two_spin_charge()]).unwrap();
        assert_eq!(f.parameter_count(), 6);
        assert_eq!(f.random_params(&mut seeded_rng(0)).len(), 6);
    }
}
