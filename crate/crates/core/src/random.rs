//! Seed derivation and random instance generators.
//!
//! Every randomised task draws from its own stream: the stream seed is the
//! first eight bytes of `SHA-256(root || task || index)`, so a sweep can be
//! split across threads without changing any sampled value.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::info::Ensemble;
use crate::linalg::c;
use crate::quantum::{DensityMatrix, StateVector};
use crate::{CMatrix, CVector, Error, Result};

pub fn derive_seed(root: u64, task: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update((task.len() as u64).to_le_bytes());
    h.update(task.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    let mut b = [0u8; 8];
    b.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(b)
}

pub fn rng_for(root: u64, task: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, task, index))
}

/// Matrix of i.i.d. standard complex Gaussians (`E|z|^2 = 1`).
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * s, im * s)
    })
}

/// Haar-random isometry `cols -> rows` (orthonormal columns).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<CMatrix> {
    if cols > rows || cols == 0 {
        return Err(Error::OutOfRange(format!("no isometry {cols} -> {rows}")));
    }
    let u = crate::quantum::haar_unitary_with_rng(rows, rng)?;
    Ok(u.columns(0, cols).into_owned())
}

pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<StateVector> {
    let g = ginibre(d, 1, rng);
    StateVector::normalized(CVector::from_column_slice(g.as_slice()), vec![d])
}

/// Induced-measure density matrix `G G^dagger / Tr` with `G` of shape `d x rank`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if rank == 0 {
        return Err(Error::OutOfRange("rank must be positive".into()));
    }
    let g = ginibre(d, rank, rng);
    DensityMatrix::normalized(&g * g.adjoint(), vec![d])
}

/// Random probability vector (normalised exponentials, i.e. flat Dirichlet).
pub fn random_priors<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Ensemble of `n_states` random mixed states of random rank on dimension `d`.
pub fn random_ensemble<R: Rng + ?Sized>(n_states: usize, d: usize, rng: &mut R) -> Result<Ensemble> {
    let priors = random_priors(n_states, rng);
    let states = (0..n_states)
        .map(|_| {
            let rank = rng.random_range(1..=d);
            random_density(d, rank, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(priors, states)
}

/// Ensemble of random pure states with random priors.
pub fn random_pure_ensemble<R: Rng + ?Sized>(n_states: usize, d: usize, rng: &mut R) -> Result<Ensemble> {
    let priors = random_priors(n_states, rng);
    let states = (0..n_states)
        .map(|_| random_pure(d, rng).map(|s| s.density()))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(priors, states)
}
