//! Seeded workloads shared by the benchmarks, so every run times the same inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qbsc_core::protocols::{honest_ensemble, ProtocolInstance};
use qbsc_core::quantum::UnitaryKind;
use qbsc_core::{random, Ensemble, QuantumChannel, Result};

pub const SEED: u64 = 0x5eed;

pub fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

/// Random Hermitian matrix of dimension `d` (a full-rank density matrix).
pub fn hermitian(d: usize) -> Result<qbsc_core::CMatrix> {
    Ok(random::random_density(d, d, &mut rng(d as u64))?.matrix().clone())
}

/// `n_states` random mixed states in dimension `d`.
pub fn mixed_ensemble(n_states: usize, d: usize) -> Result<Ensemble> {
    random::random_ensemble(n_states, d, &mut rng((n_states * 100 + d) as u64))
}

/// Honest LOCKCOM ensemble on `n` qubits with the identity/Hadamard bases.
pub fn two_basis(n: usize) -> Result<(ProtocolInstance, Ensemble)> {
    let inst = ProtocolInstance::standard(UnitaryKind::IdentityHadamard, n, SEED)?;
    let ens = honest_ensemble(&inst)?;
    Ok((inst, ens))
}

pub fn channel(d: usize, rank: usize) -> Result<QuantumChannel> {
    QuantumChannel::random(d, d, rank, &mut rng(1000 + d as u64))
}
