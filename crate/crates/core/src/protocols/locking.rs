//! How much of the committed string an honest Bob can extract.

use serde::{Deserialize, Serialize};

use super::lockcom::{honest_ensemble, ProtocolInstance};
use crate::info::{self, SeeSawConfig};
use crate::quantum::UnitaryKind;
use crate::{Error, Result};

/// Largest string length handled by the see-saw estimator.
pub const LOCKING_MAX_BITS: usize = 3;
pub const LOCKING_MAX_BASES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LockingReport {
    pub protocol: String,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Holevo quantity of Bob's ensemble `{2^-n, 1/k sum_r U_r |x><x| U_r^dagger}`.
    pub chi: f64,
    /// See-saw value of I(X;Y) (lower bound on the accessible information).
    pub iacc_lower_bound: f64,
    pub seesaw_start: usize,
    pub seesaw_iterations: usize,
    /// Binding parameter `log2 k`.
    pub binding_a: f64,
}

/// Locking figures for an arbitrary LOCKCOM instance.
pub fn locking_report(inst: &ProtocolInstance, cfg: &SeeSawConfig) -> Result<LockingReport> {
    let n = inst.n_bits()?;
    if n > LOCKING_MAX_BITS {
        return Err(Error::TooLarge(n, LOCKING_MAX_BITS));
    }
    let ens = honest_ensemble(inst)?;
    let acc = info::accessible_info_estimate(&ens, cfg)?;
    let k = inst.num_bases();
    Ok(LockingReport {
        protocol: inst.label().to_string(),
        n,
        k,
        seed: cfg.seed,
        chi: acc.holevo,
        iacc_lower_bound: acc.lower_bound,
        seesaw_start: acc.start,
        seesaw_iterations: acc.iterations,
        binding_a: (k as f64).log2(),
    })
}

/// `k` Haar-random bases on `n` qubits.
pub fn locking_experiment(n: usize, k: usize, seed: u64, cfg: &SeeSawConfig) -> Result<LockingReport> {
    if n == 0 || n > LOCKING_MAX_BITS {
        return Err(Error::OutOfRange(format!("n = {n} outside 1..={LOCKING_MAX_BITS}")));
    }
    if k == 0 || k > LOCKING_MAX_BASES {
        return Err(Error::OutOfRange(format!("k = {k} outside 1..={LOCKING_MAX_BASES}")));
    }
    let inst = ProtocolInstance::standard(UnitaryKind::Haar(k), 1usize << n, seed)?;
    let cfg = SeeSawConfig { seed, ..*cfg };
    locking_report(&inst, &cfg)
}
