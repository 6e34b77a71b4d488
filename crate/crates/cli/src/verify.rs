//! The bound-verification suite. Each function samples its instances from
//! `(seed, task name, index)` streams, evaluates both sides with `qbsc-core`
//! operations and folds the cases into one [`CheckRecord`].

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qbsc_core::hashing::{self, HashFamily};
use qbsc_core::info::{self, Ensemble};
use qbsc_core::linalg::real;
use qbsc_core::protocols::{
    self, binding_audit, honest_ensemble, lockcom_commit, CheatKind, ProtocolInstance, RevealStrategy,
};
use qbsc_core::quantum::{self, DensityMatrix, QuantumChannel, UnitaryKind};
use qbsc_core::random::{self, rng_for};
use qbsc_core::{Result, StateVector};

use crate::report::{CheckRecord, Tally};

pub const GUESSING_TOL: f64 = 1e-10;
pub const PA_TOL: f64 = 1e-9;
pub const UNCERTAINTY_TOL: f64 = 1e-7;
pub const CONTINUITY_TOL: f64 = 1e-12;
pub const CHEAT_TOL: f64 = 1e-7;
pub const BINDING_TOL: f64 = 1e-9;
pub const FVDG_TOL: f64 = 1e-9;

pub const GUESSING: &str = "guessing-bound";
pub const PRIVACY_AMPLIFICATION: &str = "privacy-amplification";
pub const CHANNEL_UNCERTAINTY: &str = "channel-uncertainty";
pub const HOLEVO_CONTINUITY: &str = "holevo-continuity";
pub const CHEAT_SENSITIVITY: &str = "cheat-sensitivity";
pub const RETURNED_INFORMATION: &str = "cheat-returned-information";
pub const BINDING: &str = "binding";
pub const BINDING_HONEST: &str = "binding-honest";
pub const FVDG_LOWER: &str = "fuchs-van-de-graaf-lower";
pub const FVDG_UPPER: &str = "fuchs-van-de-graaf-upper";

pub const ALL_RECORDS: [&str; 10] = [
    GUESSING,
    PRIVACY_AMPLIFICATION,
    CHANNEL_UNCERTAINTY,
    HOLEVO_CONTINUITY,
    CHEAT_SENSITIVITY,
    RETURNED_INFORMATION,
    BINDING,
    BINDING_HONEST,
    FVDG_LOWER,
    FVDG_UPPER,
];

/// Instance counts for one suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSize {
    pub guessing: usize,
    pub pa_ensembles: usize,
    pub pa_bits: Vec<usize>,
    pub channels: usize,
    pub continuity: usize,
    pub theta_points: usize,
    pub cheat_dims: Vec<usize>,
    pub binding: usize,
    pub fidelity_pairs: usize,
}

impl Default for SuiteSize {
    fn default() -> Self {
        Self {
            guessing: 200,
            pa_ensembles: 50,
            pa_bits: vec![4, 6],
            channels: 200,
            continuity: 100,
            theta_points: 16,
            cheat_dims: vec![2, 4],
            binding: 100,
            fidelity_pairs: 200,
        }
    }
}

impl SuiteSize {
    /// Every random-instance count set to `cases` (grid sizes unchanged).
    pub fn uniform(cases: usize) -> Self {
        Self {
            guessing: cases,
            pa_ensembles: cases,
            channels: cases,
            continuity: cases,
            binding: cases,
            fidelity_pairs: cases,
            ..Self::default()
        }
    }
}

fn fold(name: &str, tol: f64, fault: Option<&str>, pairs: impl IntoIterator<Item = (f64, f64)>) -> CheckRecord {
    let mut t = Tally::new(name, tol, fault == Some(name));
    for (l, r) in pairs {
        t.push(l, r);
    }
    t.finish()
}

/// `2^{-H_2}` against the square-root measurement, `d, N <= 16`.
pub fn guessing_bound(seed: u64, cases: usize, fault: Option<&str>) -> Result<CheckRecord> {
    let pairs = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, GUESSING, i as u64);
            let d = rand_dim(&mut rng, 1, 16);
            let n = rand_dim(&mut rng, 1, 16);
            let ens = random::random_ensemble(n, d, &mut rng)?;
            let h2 = info::collision_conditional_entropy(&ens)?;
            Ok((2f64.powf(-h2), info::srm_guess(&ens)?.success_probability))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(GUESSING, GUESSING_TOL, fault, pairs))
}

fn rand_dim<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

/// Family average of `d(E_g)` against `1/2 2^{-(H_2 - s)/2}` for every `s`,
/// over random ensembles and the two-basis LOCKCOM ensemble.
pub fn privacy_amplification(seed: u64, cases: usize, bits: &[usize], fault: Option<&str>) -> Result<CheckRecord> {
    let mut pairs = Vec::new();
    for &n in bits {
        let families = (0..=n).map(|s| HashFamily::full(n, s)).collect::<Result<Vec<_>>>()?;
        let mut ensembles = (0..cases)
            .map(|i| {
                let mut rng = rng_for(seed, PRIVACY_AMPLIFICATION, (n * 1_000_000 + i) as u64);
                let d = rand_dim(&mut rng, 1, 4);
                random::random_ensemble(1 << n, d, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        ensembles.push(honest_ensemble(&ProtocolInstance::standard(UnitaryKind::IdentityHadamard, n, 0)?)?);
        for ens in &ensembles {
            for (s, fam) in families.iter().enumerate() {
                let pa = hashing::pa_average_distance(ens, s, fam)?;
                pairs.push((pa.lhs, pa.rhs));
            }
        }
    }
    Ok(fold(PRIVACY_AMPLIFICATION, PA_TOL, fault, pairs))
}

/// `chi(Lambda(E_0)) + chi(Lambda(E_1)) <= I(tau; Lambda)` for the
/// computational and Fourier bases, `d in {2, 4}`, Kraus rank up to `d^2`.
pub fn channel_uncertainty(seed: u64, cases: usize, fault: Option<&str>) -> Result<CheckRecord> {
    let pairs = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, CHANNEL_UNCERTAINTY, i as u64);
            let d = if i % 2 == 0 { 2 } else { 4 };
            let rank = rand_dim(&mut rng, 1, d * d);
            let ch = QuantumChannel::random(d, d, rank, &mut rng)?;
            let basis = Ensemble::uniform((0..d).map(|x| DensityMatrix::basis(d, x)).collect::<Result<Vec<_>>>()?)?;
            let conj = basis.conjugate_by(&quantum::fourier(d)?)?;
            let lhs = info::holevo_chi(&basis.map_channel(&ch)?)? + info::holevo_chi(&conj.map_channel(&ch)?)?;
            Ok((lhs, info::channel_mutual_info(&ch)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(CHANNEL_UNCERTAINTY, UNCERTAINTY_TOL, fault, pairs))
}

/// A pure ensemble and a perturbed copy with mean overlap `1 - eps`.
pub fn perturbed_pair(seed: u64, index: u64) -> Result<(Ensemble, Ensemble, f64, usize)> {
    let mut rng = rng_for(seed, HOLEVO_CONTINUITY, index);
    let d = rand_dim(&mut rng, 2, 8);
    let n = rand_dim(&mut rng, 2, 8);
    // spread the perturbation strength over several decades
    let scale = 10f64.powf(rng.random_range(-3.0..0.3));
    let priors = random::random_priors(n, &mut rng);
    let states = (0..n).map(|_| random::random_pure(d, &mut rng)).collect::<Result<Vec<_>>>()?;
    let perturbed = states
        .iter()
        .map(|s| {
            let noise = random::random_pure(d, &mut rng)?;
            StateVector::normalized(s.amplitudes() + noise.amplitudes() * real(scale), vec![d])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut overlap = 0.0;
    for (p, (a, b)) in priors.iter().zip(states.iter().zip(&perturbed)) {
        overlap += p * a.inner(b)?.norm_sqr();
    }
    let eps = (1.0 - overlap).clamp(0.0, 1.0);
    Ok((Ensemble::from_pure(priors.clone(), &states)?, Ensemble::from_pure(priors, &perturbed)?, eps, d))
}

/// `|chi(E~) - chi(E)| <= 4 sqrt(eps) log2 d + 2 mu(2 sqrt(eps))`.
pub fn holevo_continuity(seed: u64, cases: usize, fault: Option<&str>) -> Result<CheckRecord> {
    let pairs = (0..cases)
        .into_par_iter()
        .map(|i| {
            let (e, f, eps, d) = perturbed_pair(seed, i as u64)?;
            let gap = (info::holevo_chi(&e)? - info::holevo_chi(&f)?).abs();
            Ok((gap, info::fannes_ensemble_bound(eps, d)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold(HOLEVO_CONTINUITY, CONTINUITY_TOL, fault, pairs))
}

/// Every cheat family on a `theta_points` grid for each dimension; returns
/// the cheat-sensitivity record and the returned-information record.
pub fn cheat_sensitivity(theta_points: usize, dims: &[usize], fault: Option<&str>) -> Result<[CheckRecord; 2]> {
    let grid = protocols::theta_grid(theta_points);
    let mut bound = Vec::new();
    let mut returned = Vec::new();
    for kind in CheatKind::ALL {
        for &d in dims {
            for (_, out) in protocols::cheat_sweep(kind, d, &grid)? {
                bound.push((out.chi_c, out.bound));
                if let Some(c) = out.chain.iter().find(|c| c.name == "returned-information") {
                    returned.push((c.lhs, c.rhs));
                }
            }
        }
    }
    Ok([
        fold(CHEAT_SENSITIVITY, CHEAT_TOL, fault, bound),
        fold(RETURNED_INFORMATION, CHEAT_TOL, fault, returned),
    ])
}

/// `sum_{x,r} Tr(|x><x| U_r^dagger rho U_r) = |U|` for random Bob states with
/// `|U|` in {1, 2, 4}, and the honest commitment opening exactly one string.
pub fn binding(seed: u64, cases: usize, fault: Option<&str>) -> Result<[CheckRecord; 2]> {
    let instances = [
        ProtocolInstance::standard(UnitaryKind::Identity, 4, seed)?,
        ProtocolInstance::standard(UnitaryKind::IdentityHadamard, 6, seed)?,
        ProtocolInstance::standard(UnitaryKind::Haar(4), 8, seed)?,
    ];
    let audit = (0..cases)
        .into_par_iter()
        .map(|i| {
            let inst = &instances[i % instances.len()];
            let mut rng = rng_for(seed, BINDING, i as u64);
            let rank = rand_dim(&mut rng, 1, inst.dim());
            let rho = random::random_density(inst.dim(), rank, &mut rng)?;
            let a = binding_audit(inst, &rho, &RevealStrategy::BestPerString)?;
            Ok(((a.upper_bound - inst.num_bases() as f64).abs(), BINDING_TOL))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut honest = Vec::new();
    for inst in &instances {
        for r in 0..inst.num_bases() {
            let x = (seed as usize + r) % inst.dim();
            let t = lockcom_commit(inst, x, r)?;
            let state = t.committed_state.as_ref().expect("commit sets the state");
            let a = binding_audit(inst, state, &RevealStrategy::Constant(r))?;
            honest.push(((a.achieved - 1.0).abs(), BINDING_TOL));
        }
    }
    Ok([
        // equalities: |lhs - target| against the tolerance itself
        fold(BINDING, 0.0, fault, audit),
        fold(BINDING_HONEST, 0.0, fault, honest),
    ])
}

/// `1 - F <= D <= sqrt(1 - F^2)` for random pairs with `d <= 8`.
pub fn fuchs_van_de_graaf(seed: u64, cases: usize, fault: Option<&str>) -> Result<[CheckRecord; 2]> {
    let vals = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, "fuchs-van-de-graaf", i as u64);
            let d = rand_dim(&mut rng, 1, 8);
            let ra = rand_dim(&mut rng, 1, d);
            let rb = rand_dim(&mut rng, 1, d);
            let rho = random::random_density(d, ra, &mut rng)?;
            let sigma = random::random_density(d, rb, &mut rng)?;
            Ok((quantum::trace_distance(&rho, &sigma)?, quantum::fidelity(&rho, &sigma)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok([
        fold(FVDG_LOWER, FVDG_TOL, fault, vals.iter().map(|&(t, f)| (1.0 - f, t))),
        fold(FVDG_UPPER, FVDG_TOL, fault, vals.iter().map(|&(t, f)| (t, (1.0 - f * f).max(0.0).sqrt()))),
    ])
}

/// The whole suite, in [`ALL_RECORDS`] order.
pub fn run_suite(seed: u64, size: &SuiteSize, fault: Option<&str>) -> Result<Vec<CheckRecord>> {
    let mut out = vec![
        guessing_bound(seed, size.guessing, fault)?,
        privacy_amplification(seed, size.pa_ensembles, &size.pa_bits, fault)?,
        channel_uncertainty(seed, size.channels, fault)?,
        holevo_continuity(seed, size.continuity, fault)?,
    ];
    out.extend(cheat_sensitivity(size.theta_points, &size.cheat_dims, fault)?);
    out.extend(binding(seed, size.binding, fault)?);
    out.extend(fuchs_van_de_graaf(seed, size.fidelity_pairs, fault)?);
    Ok(out)
}
