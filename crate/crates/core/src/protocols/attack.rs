//! Alice's hashing attack against a string commitment.
//!
//! Alice picks a two-universal `g` with small `d(E_g)`, commits honestly to
//! the uniform superposition over a preimage `g^{-1}(y0)` while keeping the
//! entangled copy of `x`, and later rotates her side with the Uhlmann unitary
//! towards the purification for another label `y`. Everything is computed
//! exactly; the purification for label `y` is
//!
//! `|psi_y> = |g^{-1}(y)|^{-1/2} sum_{x in g^{-1}(y)} |x>^X (sum_a A_x[a, b] |a>^R |b>^B)`
//!
//! with `A_x` the honest commitment amplitudes (auxiliary register `R` held
//! by Alice, `B` sent to Bob).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hashing::{self, HashFamily, HashFunction};
use crate::info::{self, Ensemble};
use crate::linalg::{self, real};
use crate::protocols::lockcom::ProtocolInstance;
use crate::quantum::{self, DensityMatrix};
use crate::{CMatrix, CVector, Error, Result, MAX_STATE_DIM};

/// `4 (log2 5 - 1)`
pub const GAMMA_DEFAULT: f64 = 5.287_712_379_549_449;
/// `5 log2 5 - 4`
pub const C_CONST: f64 = 7.609_640_474_436_812;

const SOUNDNESS_TOL: f64 = 1e-6;
const SUM_TOL: f64 = 1e-9;

/// A commitment protocol whose honest commit phase leaves Alice and Bob in a
/// pure state `sum_{a,b} A_x[a,b] |a>^R |b>^B`, with Bob accepting `(x, a)`
/// on the rank-one projector onto [`CommitScheme::accept_vector`].
pub trait CommitScheme: Sync {
    fn label(&self) -> String;
    fn n_bits(&self) -> Result<usize>;
    fn bob_dim(&self) -> usize;
    fn aux_dim(&self) -> usize;
    /// `A_x`, shape `aux_dim x bob_dim`, unit Frobenius norm.
    fn commit_amplitudes(&self, x: usize) -> CMatrix;
    /// Bob's accepting vector when Alice announces `x` with auxiliary outcome `a`.
    fn accept_vector(&self, x: usize, a: usize) -> CVector;
}

impl CommitScheme for ProtocolInstance {
    fn label(&self) -> String {
        self.label().to_string()
    }

    fn n_bits(&self) -> Result<usize> {
        ProtocolInstance::n_bits(self)
    }

    fn bob_dim(&self) -> usize {
        self.dim()
    }

    fn aux_dim(&self) -> usize {
        self.num_bases()
    }

    /// Row `r` is `U_r |x> / sqrt(|U|)`.
    fn commit_amplitudes(&self, x: usize) -> CMatrix {
        let k = self.num_bases();
        let d = self.dim();
        let scale = real((k as f64).sqrt().recip());
        CMatrix::from_fn(k, d, |r, b| self.unitaries().unitaries()[r][(b, x)] * scale)
    }

    fn accept_vector(&self, x: usize, a: usize) -> CVector {
        self.unitaries().unitaries()[a].column(x).into_owned()
    }
}

/// Classical baseline: Bob receives the `b` most significant bits of `x` and
/// accepts any revealed string that matches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalPrefix {
    pub n: usize,
    pub b: usize,
}

impl ClassicalPrefix {
    pub fn new(n: usize, b: usize) -> Result<Self> {
        if b > n || n == 0 || n > hashing::MAX_HASH_BITS {
            return Err(Error::OutOfRange(format!("prefix of {b} bits out of {n}")));
        }
        Ok(Self { n, b })
    }
}

impl CommitScheme for ClassicalPrefix {
    fn label(&self) -> String {
        format!("classical-prefix-{}-{}", self.n, self.b)
    }

    fn n_bits(&self) -> Result<usize> {
        Ok(self.n)
    }

    fn bob_dim(&self) -> usize {
        1 << self.b
    }

    fn aux_dim(&self) -> usize {
        1
    }

    fn commit_amplitudes(&self, x: usize) -> CMatrix {
        let mut a = CMatrix::zeros(1, self.bob_dim());
        a[(0, x >> (self.n - self.b))] = linalg::ONE;
        a
    }

    fn accept_vector(&self, x: usize, _a: usize) -> CVector {
        linalg::basis_vector(self.bob_dim(), x >> (self.n - self.b))
    }
}

/// Bob's states `rho_x = A_x^T conj(A_x)` with uniform priors.
pub fn scheme_ensemble(scheme: &dyn CommitScheme) -> Result<Ensemble> {
    let n = scheme.n_bits()?;
    let d = scheme.bob_dim();
    let states = (0..1usize << n)
        .map(|x| {
            let a = scheme.commit_amplitudes(x);
            let rho = (a.adjoint() * &a).transpose();
            DensityMatrix::new(linalg::hermitize(&rho), vec![d])
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(states)
}

/// Rows `A_x[a, :] / sqrt(|pre|)` for every `(x, a)` with `x` in `pre`, with
/// their labels. Bob's reduced state of `|psi_y>` is `F^T conj(F)`.
fn label_rows(scheme: &dyn CommitScheme, pre: &[u32]) -> (CMatrix, Vec<(usize, usize)>) {
    let k = scheme.aux_dim();
    let d = scheme.bob_dim();
    let scale = real((pre.len() as f64).sqrt().recip());
    let mut rows = CMatrix::zeros(pre.len() * k, d);
    let mut labels = Vec::with_capacity(pre.len() * k);
    for (i, &x) in pre.iter().enumerate() {
        let a = scheme.commit_amplitudes(x as usize);
        for r in 0..k {
            for b in 0..d {
                rows[(i * k + r, b)] = a[(r, b)] * scale;
            }
            labels.push((x as usize, r));
        }
    }
    (rows, labels)
}

/// Bob's reduced state `sigma_y` from the label rows.
fn reduced_from_rows(rows: &CMatrix) -> DensityMatrix {
    let m = (rows.adjoint() * rows).transpose();
    DensityMatrix::from_parts_unchecked(linalg::hermitize(&m), vec![rows.ncols()])
}

/// Spectrum of `sigma_y` (length `bob_dim`, descending) through the Gram
/// matrix of the label rows, which is at most `|pre| * aux_dim` wide.
fn label_spectrum(rows: &CMatrix) -> Result<Vec<f64>> {
    let d = rows.ncols();
    let gram = rows.conjugate() * rows.transpose();
    let mut ev = linalg::eigvalsh(&gram)?;
    ev.truncate(d);
    ev.resize(d, 0.0);
    Ok(ev.into_iter().map(|l| l.max(0.0)).collect())
}

/// `delta(1/d, sigma_y)` from the spectrum of `sigma_y`.
fn distance_to_mixed(spectrum: &[f64]) -> f64 {
    let inv = 1.0 / spectrum.len() as f64;
    0.5 * spectrum.iter().map(|l| (l - inv).abs()).sum::<f64>()
}

/// How the distances `delta(sigma, sigma_y)` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceRoute {
    /// The average is maximally mixed: spectra via small Gram matrices.
    MixedAverage,
    /// Dense hashed ensembles.
    Dense,
}

/// `delta(sigma, sigma_y)` for every label of `g`, in label order.
fn label_distances(
    scheme: &dyn CommitScheme,
    ens: &Ensemble,
    g: &HashFunction,
    route: DistanceRoute,
) -> Result<Vec<f64>> {
    match route {
        DistanceRoute::MixedAverage => g
            .preimages()
            .iter()
            .map(|pre| Ok(distance_to_mixed(&label_spectrum(&label_rows(scheme, pre).0)?)))
            .collect(),
        DistanceRoute::Dense => {
            let h = hashing::hashed_ensemble(ens, g)?;
            h.states()
                .iter()
                .map(|s| quantum::trace_distance(ens.average(), s))
                .collect()
        }
    }
}

/// Report of Alice's attack for one set of parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UhlmannStep {
    pub y: u32,
    /// `delta(sigma_{y0}, sigma_y)`
    pub delta: f64,
    /// `|<psi_y| (U (x) 1) |psi_{y0}>|` for the Uhlmann unitary `U`
    pub overlap: f64,
    /// `F(sigma_{y0}, sigma_y)`
    pub fidelity: f64,
    /// Probability that Alice reveals some `x` in `g^{-1}(y)` and Bob accepts.
    pub success: f64,
    /// `1 - sqrt(2 delta)`
    pub step_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliceAttackReport {
    pub protocol: String,
    pub n: usize,
    pub b_claimed: f64,
    pub gamma_requested: f64,
    /// `m - b_claimed`
    pub gamma: f64,
    /// `m` was lowered to `ceil(b_claimed)` because `ceil(b + gamma) > n`.
    pub gamma_clamped: bool,
    pub m: usize,
    /// Hash output length `n - m`.
    pub s: usize,
    pub g: HashFunction,
    pub family_size: usize,
    pub family_exhaustive: bool,
    pub distance_route: DistanceRoute,
    /// `xi(E)` of the honest ensemble; the bound assumes `xi <= b_claimed`.
    pub xi: f64,
    pub premise_holds: bool,
    pub y0: u32,
    /// `1/2 * 2^{-(m - b)/2}`
    pub epsilon: f64,
    /// `d(E_g)` of the chosen `g`.
    pub best_hash_distance: f64,
    pub family_average_distance: f64,
    pub per_y_success: Vec<f64>,
    pub per_x_success: Vec<f64>,
    pub total_success: f64,
    /// `2^{n-m} (1 - 2 sqrt(2 epsilon))`
    pub soundness_bound: f64,
    pub bound_vacuous: bool,
    /// Same bound with `epsilon` replaced by the measured `d(E_g)`.
    pub empirical_lower_bound: f64,
    /// `log2(total_success)`
    pub implied_a: f64,
    pub uhlmann_steps: Vec<UhlmannStep>,
    /// `2^{-(n-m)} sum_y delta(sigma, sigma_y)`
    pub sum_eq_lhs: f64,
    /// `2 d(E_g)`
    pub sum_eq_rhs: f64,
    pub pass: bool,
}

/// `m = ceil(b + gamma)` when that fits, otherwise `ceil(b)` if that is still
/// below `n`; `None` when no admissible `m` exists.
pub fn choose_m(n: usize, b_claimed: f64, gamma: f64) -> Option<(usize, bool)> {
    let ceil = |v: f64| (v - 1e-12).ceil().max(0.0) as usize;
    let m_req = ceil(b_claimed + gamma);
    if m_req <= n {
        return Some((m_req, false));
    }
    let m_min = ceil(b_claimed);
    if m_min < n {
        Some((m_min, true))
    } else {
        None
    }
}

/// Collision trace when `sigma = 1/d`: `d sum_x p_x^2 Tr(rho_x^2)`.
fn xi_mixed_average(scheme: &dyn CommitScheme, n: usize) -> f64 {
    let d = scheme.bob_dim() as f64;
    let p = 0.5f64.powi(n as i32);
    let trace: f64 = (0..1usize << n)
        .map(|x| {
            let a = scheme.commit_amplitudes(x);
            let g = &a * a.adjoint();
            g.iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
        .sum::<f64>()
        * p
        * p
        * d;
    n as f64 + trace.log2()
}

/// Run the attack with `m` chosen by [`choose_m`].
///
/// `seed` only matters when the hash family is sampled (`n > 8`).
pub fn alice_attack(scheme: &dyn CommitScheme, b_claimed: f64, gamma: f64, seed: u64) -> Result<AliceAttackReport> {
    let n = scheme.n_bits()?;
    if !(b_claimed >= 0.0 && gamma >= 0.0) {
        return Err(Error::OutOfRange(format!("b = {b_claimed}, gamma = {gamma}")));
    }
    let (m, gamma_clamped) = match choose_m(n, b_claimed, gamma) {
        Some(v) => v,
        None => {
            let m_req = (b_claimed + gamma - 1e-12).ceil() as usize;
            return Err(Error::MExceedsN { m: m_req, n });
        }
    };
    let joint = (1usize << n) * scheme.aux_dim() * scheme.bob_dim();
    if joint > MAX_STATE_DIM {
        return Err(Error::TooLarge(joint, MAX_STATE_DIM));
    }
    let s = n - m;
    let ens = scheme_ensemble(scheme)?;
    let d_b = scheme.bob_dim();
    let mixed = linalg::max_abs_diff(ens.average().matrix(), &(linalg::identity(d_b) / real(d_b as f64))) < 1e-12;
    let route = if mixed {
        DistanceRoute::MixedAverage
    } else {
        DistanceRoute::Dense
    };
    let xi = if mixed {
        xi_mixed_average(scheme, n)
    } else {
        info::xi(&ens)?
    };

    // (2) best hash function of output length s
    let family = HashFamily::standard(n, s, seed)?;
    let label_sets: Vec<Vec<f64>> = family
        .members()
        .par_iter()
        .map(|g| label_distances(scheme, &ens, g, route))
        .collect::<Result<Vec<_>>>()?;
    let weight = 0.5f64.powi(s as i32);
    let d_members: Vec<f64> = label_sets.iter().map(|ds| weight * ds.iter().sum::<f64>()).collect();
    let mut best = 0;
    for (i, d) in d_members.iter().enumerate() {
        if *d < d_members[best] {
            best = i;
        }
    }
    let g = family.members()[best];
    let best_hash_distance = d_members[best];
    let family_average_distance = d_members.iter().sum::<f64>() / d_members.len() as f64;

    // (3) label closest to the average
    let dist = &label_sets[best];
    let mut y0 = 0usize;
    for (y, d) in dist.iter().enumerate() {
        if *d < dist[y0] {
            y0 = y;
        }
    }
    let sum_eq_lhs = weight * dist.iter().sum::<f64>();

    // (4) Uhlmann rotation from psi_{y0} to every psi_y, then the reveal
    let pre = g.preimages();
    let (src, _) = label_rows(scheme, &pre[y0]);
    let sigma0 = reduced_from_rows(&src);
    let mut per_x_success = vec![0.0; 1usize << n];
    let steps: Vec<(UhlmannStep, Vec<(usize, f64)>)> = pre
        .par_iter()
        .enumerate()
        .map(|(y, pre_y)| uhlmann_step(scheme, &src, &sigma0, y as u32, pre_y))
        .collect::<Result<Vec<_>>>()?;
    let mut per_y_success = Vec::with_capacity(steps.len());
    let mut uhlmann_steps = Vec::with_capacity(steps.len());
    for (step, xs) in steps {
        per_y_success.push(step.success);
        uhlmann_steps.push(step);
        for (x, p) in xs {
            per_x_success[x] += p;
        }
    }
    let total_success: f64 = per_x_success.iter().sum();
    let sum_q: f64 = per_y_success.iter().sum();

    let epsilon = 0.5 * 2f64.powf(-(m as f64 - b_claimed) / 2.0);
    let labels = (1u64 << s) as f64;
    let soundness_bound = labels * (1.0 - 2.0 * (2.0 * epsilon).sqrt());
    let bound_vacuous = soundness_bound <= 0.0;
    let empirical_lower_bound = labels * (1.0 - 2.0 * (2.0 * best_hash_distance).sqrt());
    let sum_eq_rhs = 2.0 * best_hash_distance;

    let sound = bound_vacuous || total_success >= soundness_bound - SOUNDNESS_TOL;
    let empirical_ok = total_success >= empirical_lower_bound - SOUNDNESS_TOL;
    let pass = sound
        && empirical_ok
        && uhlmann_steps.iter().all(|s| s.pass)
        && total_success >= sum_q - SUM_TOL
        && sum_eq_lhs <= sum_eq_rhs + SUM_TOL;

    Ok(AliceAttackReport {
        protocol: scheme.label(),
        n,
        b_claimed,
        gamma_requested: gamma,
        gamma: m as f64 - b_claimed,
        gamma_clamped,
        m,
        s,
        g,
        family_size: family.len(),
        family_exhaustive: family.is_exhaustive(),
        distance_route: route,
        xi,
        premise_holds: xi <= b_claimed + 1e-9,
        y0: y0 as u32,
        epsilon,
        best_hash_distance,
        family_average_distance,
        per_y_success,
        per_x_success,
        total_success,
        soundness_bound,
        bound_vacuous,
        empirical_lower_bound,
        implied_a: total_success.log2(),
        uhlmann_steps,
        sum_eq_lhs,
        sum_eq_rhs,
        pass,
    })
}

/// Block form of the Uhlmann rotation: both purifications live on the rows
/// `(x, a)` of their own preimage, so the optimal unitary is the polar factor
/// of the (small) cross-Gram matrix between the two row blocks.
fn uhlmann_step(
    scheme: &dyn CommitScheme,
    src: &CMatrix,
    sigma0: &DensityMatrix,
    y: u32,
    pre_y: &[u32],
) -> Result<(UhlmannStep, Vec<(usize, f64)>)> {
    let (tgt, labels) = label_rows(scheme, pre_y);
    // maximise |Tr(U src tgt^dagger)| over U: src-rows -> tgt-rows
    let cross = src * tgt.adjoint();
    let svd = cross.svd(true, true);
    let w = svd.u.as_ref().ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let v_t = svd.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let u = v_t.adjoint() * w.adjoint();
    let overlap = svd.singular_values.iter().sum::<f64>().min(1.0);
    let rotated = &u * src;

    let mut per_x: Vec<(usize, f64)> = Vec::with_capacity(pre_y.len());
    let mut success = 0.0;
    for (row, &(x, a)) in labels.iter().enumerate() {
        let v = scheme.accept_vector(x, a);
        let amp = (0..v.len()).fold(linalg::ZERO, |acc, b| acc + v[b].conj() * rotated[(row, b)]);
        let p = amp.norm_sqr();
        success += p;
        match per_x.last_mut() {
            Some((last, q)) if *last == x => *q += p,
            _ => per_x.push((x, p)),
        }
    }

    let sigma_y = reduced_from_rows(&tgt);
    let delta = quantum::trace_distance(sigma0, &sigma_y)?;
    let fidelity = quantum::fidelity(sigma0, &sigma_y)?;
    let step_bound = 1.0 - (2.0 * delta).sqrt();
    Ok((
        UhlmannStep {
            y,
            delta,
            overlap,
            fidelity,
            success,
            step_bound,
            pass: success >= step_bound - SOUNDNESS_TOL,
        },
        per_x,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{StateVector, UnitaryKind};

    fn ih(n: usize) -> ProtocolInstance {
        ProtocolInstance::standard(UnitaryKind::IdentityHadamard, n, 0).unwrap()
    }

    #[test]
    fn constants() {
        assert!((GAMMA_DEFAULT - 4.0 * (5f64.log2() - 1.0)).abs() < 1e-14);
        assert!((C_CONST - (5.0 * 5f64.log2() - 4.0)).abs() < 1e-14);
    }

    #[test]
    fn m_rule() {
        assert_eq!(choose_m(6, 3.0, GAMMA_DEFAULT), Some((3, true)));
        assert_eq!(choose_m(8, 4.0, GAMMA_DEFAULT), Some((4, true)));
        assert_eq!(choose_m(4, 4.0, GAMMA_DEFAULT), None);
        assert_eq!(choose_m(12, 1.0, GAMMA_DEFAULT), Some((7, false)));
        assert_eq!(choose_m(3, 3.0, 0.0), Some((3, false)));
    }

    #[test]
    fn rejects_m_above_n() {
        assert!(matches!(
            alice_attack(&ih(4), 4.0, GAMMA_DEFAULT, 0),
            Err(Error::MExceedsN { n: 4, .. })
        ));
    }

    #[test]
    fn single_basis_single_label() {
        let id = ProtocolInstance::standard(UnitaryKind::Identity, 3, 0).unwrap();
        let r = alice_attack(&id, 3.0, 0.0, 0).unwrap();
        assert_eq!((r.m, r.s), (3, 0));
        assert_eq!(r.per_y_success.len(), 1);
        assert!((r.total_success - 1.0).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn fast_distances_match_dense() {
        let inst = ih(4);
        let ens = scheme_ensemble(&inst).unwrap();
        for key in [1, 7, 13] {
            let g = HashFunction::new(4, 2, key).unwrap();
            let a = label_distances(&inst, &ens, &g, DistanceRoute::MixedAverage).unwrap();
            let b = label_distances(&inst, &ens, &g, DistanceRoute::Dense).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
            let h = hashing::hashed_ensemble(&ens, &g).unwrap();
            let d = info::ensemble_uniformity_distance(&h).unwrap();
            assert!((0.25 * a.iter().sum::<f64>() - d).abs() < 1e-10);
        }
        assert!((xi_mixed_average(&inst, 4) - info::xi(&ens).unwrap()).abs() < 1e-9);
        let fam = HashFamily::full(4, 2).unwrap();
        let report = alice_attack(&inst, 0.0, 2.0, 0).unwrap();
        let (g, d) = hashing::best_hash(&ens, 2, &fam).unwrap();
        // the two routes may break near-ties differently
        let chosen = info::ensemble_uniformity_distance(&hashing::hashed_ensemble(&ens, &report.g).unwrap()).unwrap();
        assert!((chosen - d).abs() < 1e-10, "{:?} vs {g:?}", report.g);
        assert!((report.best_hash_distance - d).abs() < 1e-10);
        let pa = hashing::pa_average_distance(&ens, 2, &fam).unwrap();
        assert!((report.family_average_distance - pa.lhs).abs() < 1e-10);
    }

    /// Full-space route: build both purifications, rotate with the library
    /// Uhlmann unitary, measure Alice's registers and let Bob test.
    #[test]
    fn block_uhlmann_matches_full_space() {
        let inst = ih(3);
        let report = alice_attack(&inst, 0.0, 1.0, 0).unwrap();
        let g = report.g;
        let pre = g.preimages();
        let d = inst.dim();
        let k = inst.num_bases();
        let psi = |y: usize| {
            let mut v = CVector::zeros(d * k * d);
            for &x in &pre[y] {
                let a = inst.commit_amplitudes(x as usize);
                for r in 0..k {
                    for b in 0..d {
                        v[(x as usize * k + r) * d + b] = a[(r, b)];
                    }
                }
            }
            StateVector::normalized(v, vec![d, k, d]).unwrap()
        };
        let src = psi(report.y0 as usize);
        for step in &report.uhlmann_steps {
            let tgt = psi(step.y as usize);
            let u = quantum::uhlmann_unitary(&tgt, &src, &[0, 1]).unwrap();
            assert!((u.overlap - step.overlap).abs() < 1e-9);
            assert!((u.overlap - step.fidelity).abs() < 1e-8);
            let moved = src.apply_local(&u.unitary, &[0, 1]).unwrap();
            let mut success = 0.0;
            for &x in &pre[step.y as usize] {
                for r in 0..k {
                    let (p, post) = moved.condition(&[(0, x as usize), (1, r)]).unwrap();
                    if let Some(post) = post {
                        let v = inst.encoded(x as usize, r).unwrap();
                        success += p * v.dotc(post.amplitudes()).norm_sqr();
                    }
                }
            }
            assert!((success - step.success).abs() < 1e-9, "y={} {success} vs {}", step.y, step.success);
        }
    }

    #[test]
    fn classical_baseline_has_content() {
        // b = 1 prefix bit, gamma = 4.5 -> m = 6, s = 1, epsilon = 1/16
        let scheme = ClassicalPrefix::new(7, 1).unwrap();
        let r = alice_attack(&scheme, 1.0, 4.5, 0).unwrap();
        assert_eq!((r.m, r.s), (6, 1));
        assert!(!r.bound_vacuous);
        assert!(r.soundness_bound > 0.0);
        assert!(r.total_success >= r.soundness_bound - 1e-6);
        assert!(r.premise_holds);
        assert!(r.pass);
    }

    #[test]
    fn two_bases_n6_report() {
        let r = alice_attack(&ih(6), 3.0, GAMMA_DEFAULT, 0).unwrap();
        assert_eq!(r.m, 3);
        assert!(r.gamma_clamped);
        assert!(r.bound_vacuous);
        assert!(r.uhlmann_steps.iter().all(|s| s.pass));
        assert!((r.total_success - r.per_y_success.iter().sum::<f64>()).abs() < 1e-9);
        assert!(r.pass);
    }
}
