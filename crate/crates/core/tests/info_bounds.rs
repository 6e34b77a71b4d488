use std::f64::consts::PI;

use proptest::prelude::*;
use qbsc_core::info::{self, Ensemble, SeeSawConfig};
use qbsc_core::linalg::{self, c, real};
use qbsc_core::protocols::{honest_ensemble, ProtocolInstance};
use qbsc_core::quantum::{self, DensityMatrix, QuantumChannel, UnitaryKind};
use qbsc_core::random::{self, rng_for};
use qbsc_core::{CMatrix, CVector, StateVector};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(40)
}

/// Entropy from the joint classical-quantum state: `H(X) + H(B) - H(XB)`.
fn holevo_oracle(ens: &Ensemble) -> f64 {
    let joint = ens.joint().unwrap();
    let hx = info::shannon(ens.priors());
    let hb = joint.partial_trace(&[1]).unwrap().entropy().unwrap();
    hx + hb - joint.entropy().unwrap()
}

/// For pure states the square-root measurement succeeds with
/// `sum_x (sqrt G)_xx^2`, `G_xy = sqrt(p_x p_y) <psi_x|psi_y>`.
fn srm_gram_oracle(priors: &[f64], states: &[StateVector]) -> f64 {
    let n = states.len();
    let g = CMatrix::from_fn(n, n, |x, y| {
        states[x].inner(&states[y]).unwrap() * real((priors[x] * priors[y]).sqrt())
    });
    // rank-deficient Gram matrices: drop the numerically zero eigenvalues
    let root = linalg::hermitian_map(&g, |l| if l > 1e-13 { l.sqrt() } else { 0.0 }).unwrap();
    (0..n).map(|x| root[(x, x)].re.powi(2)).sum()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn srm_meets_collision_bound(seed in any::<u64>(), d in 1usize..9, n in 1usize..9) {
        let mut rng = rng_for(seed, "srm", 0);
        let ens = random::random_ensemble(n, d, &mut rng).unwrap();
        let srm = info::srm_guess(&ens).unwrap();
        let h2 = info::collision_conditional_entropy(&ens).unwrap();
        prop_assert!(srm.success_probability >= 2f64.powf(-h2) - 1e-10);
        prop_assert!(srm.success_probability <= 1.0 + 1e-10);
    }

    #[test]
    fn srm_matches_gram_oracle(seed in any::<u64>(), d in 1usize..7, n in 1usize..7) {
        let mut rng = rng_for(seed, "gram", 0);
        let priors = random::random_priors(n, &mut rng);
        let states: Vec<StateVector> = (0..n).map(|_| random::random_pure(d, &mut rng).unwrap()).collect();
        let ens = Ensemble::from_pure(priors.clone(), &states).unwrap();
        let oracle = srm_gram_oracle(&priors, &states);
        let srm = info::srm_guess(&ens).unwrap();
        prop_assert!((srm.success_probability - oracle).abs() < 1e-9, "{} vs {} {:?}", srm.success_probability, oracle, priors);
        prop_assert!((info::collision_trace(&ens).unwrap() - oracle).abs() < 1e-9);
    }

    #[test]
    fn helstrom_dominates_srm(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = rng_for(seed, "helstrom", 0);
        let ens = random::random_ensemble(2, d, &mut rng).unwrap();
        let h = info::helstrom_guess(&ens).unwrap().success_probability;
        let s = info::srm_guess(&ens).unwrap().success_probability;
        prop_assert!(h >= s - 1e-10);
        let p = ens.priors();
        let st = ens.states();
        let gamma = st[0].matrix() * real(p[0]) - st[1].matrix() * real(p[1]);
        let norm: f64 = gamma.svd(false, false).singular_values.iter().sum();
        prop_assert!((h - 0.5 * (1.0 + norm)).abs() < 1e-9);
    }

    #[test]
    fn holevo_matches_joint_state(seed in any::<u64>(), d in 1usize..6, n in 1usize..6) {
        let mut rng = rng_for(seed, "holevo", 0);
        let ens = random::random_ensemble(n, d, &mut rng).unwrap();
        let chi = info::holevo_chi(&ens).unwrap();
        prop_assert!((chi - holevo_oracle(&ens)).abs() < 1e-9);
        prop_assert!(chi >= -1e-12);
        prop_assert!(chi <= info::shannon(ens.priors()).min((d as f64).log2()) + 1e-9);
    }

    #[test]
    fn data_processing(seed in any::<u64>(), d in 2usize..5, dout in 1usize..5, rank in 1usize..5) {
        let mut rng = rng_for(seed, "dpi", 0);
        let ens = random::random_ensemble(4, d, &mut rng).unwrap();
        let ch = QuantumChannel::random(d, dout, rank.max(d.div_ceil(dout)), &mut rng).unwrap();
        let before = info::holevo_chi(&ens).unwrap();
        let after = info::holevo_chi(&ens.map_channel(&ch).unwrap()).unwrap();
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn channel_uncertainty(seed in any::<u64>(), two in any::<bool>(), rank in 1usize..17) {
        let d = if two { 2 } else { 4 };
        let mut rng = rng_for(seed, "uncertainty", 0);
        let ch = QuantumChannel::random(d, d, rank.min(d * d), &mut rng).unwrap();
        let basis = Ensemble::uniform((0..d).map(|x| DensityMatrix::basis(d, x).unwrap()).collect()).unwrap();
        let conj = basis.conjugate_by(&quantum::fourier(d).unwrap()).unwrap();
        let lhs = info::holevo_chi(&basis.map_channel(&ch).unwrap()).unwrap()
            + info::holevo_chi(&conj.map_channel(&ch).unwrap()).unwrap();
        let rhs = info::channel_mutual_info(&ch).unwrap();
        prop_assert!(lhs <= rhs + 1e-7, "{} > {}", lhs, rhs);
    }

    #[test]
    fn xi_is_additive(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = rng_for(seed, "xi", 0);
        let a = random::random_ensemble(2, da, &mut rng).unwrap();
        let b = random::random_ensemble(4, db, &mut rng).unwrap();
        let ab = a.tensor(&b).unwrap();
        let (xa, xb, xab) = (info::xi(&a).unwrap(), info::xi(&b).unwrap(), info::xi(&ab).unwrap());
        prop_assert!((xab - xa - xb).abs() < 1e-9);
    }

    #[test]
    fn fannes_under_perturbation(seed in any::<u64>(), d in 2usize..6, n in 2usize..6, scale in 0.0f64..1.5) {
        let mut rng = rng_for(seed, "fannes", 0);
        let priors = random::random_priors(n, &mut rng);
        let states: Vec<StateVector> = (0..n).map(|_| random::random_pure(d, &mut rng).unwrap()).collect();
        let perturbed: Vec<StateVector> = states
            .iter()
            .map(|s| {
                let noise = random::random_pure(d, &mut rng).unwrap();
                StateVector::normalized(s.amplitudes() + noise.amplitudes() * real(scale), vec![d]).unwrap()
            })
            .collect();
        let overlap: f64 = priors
            .iter()
            .zip(states.iter().zip(&perturbed))
            .map(|(p, (a, b))| p * a.inner(b).unwrap().norm_sqr())
            .sum();
        let eps = (1.0 - overlap).max(0.0);
        let e = Ensemble::from_pure(priors.clone(), &states).unwrap();
        let f = Ensemble::from_pure(priors, &perturbed).unwrap();
        let gap = (info::holevo_chi(&e).unwrap() - info::holevo_chi(&f).unwrap()).abs();
        prop_assert!(gap <= info::fannes_ensemble_bound(eps, d).unwrap() + 1e-12);
    }
}

#[test]
fn orthogonal_ensemble_is_perfectly_guessed() {
    for n in 0..4 {
        let ens = Ensemble::orthogonal(n).unwrap();
        assert!((info::srm_guess(&ens).unwrap().success_probability - 1.0).abs() < 1e-12);
        assert!(info::collision_conditional_entropy(&ens).unwrap().abs() < 1e-12);
        assert!((info::xi(&ens).unwrap() - n as f64).abs() < 1e-12);
        assert!((info::ensemble_uniformity_distance(&ens).unwrap() - (1.0 - 0.5f64.powi(n as i32))).abs() < 1e-12);
    }
}

#[test]
fn identical_members_are_uniform() {
    let mut rng = rng_for(2, "identical", 0);
    let rho = random::random_density(3, 2, &mut rng).unwrap();
    let ens = Ensemble::identical(2, &rho).unwrap();
    assert!(info::ensemble_uniformity_distance(&ens).unwrap() < 1e-12);
    assert!(info::holevo_chi(&ens).unwrap().abs() < 1e-10);
    assert!(info::xi(&ens).unwrap().abs() < 1e-9);
}

/// Mutual information of the one-qubit two-basis ensemble under the
/// projective measurement along Bloch direction `(theta, phi)`, worked out by
/// hand from the Bloch vectors `(+-1/2, 0, +-1/2)`.
fn bloch_mi(theta: f64, phi: f64) -> f64 {
    let (nx, nz) = (theta.sin() * phi.cos(), theta.cos());
    let p = 0.5 * (1.0 + 0.5 * (nx + nz));
    1.0 - info::binary_entropy(p)
}

#[test]
fn one_qubit_seesaw_matches_grid() {
    let mut grid_best = 0.0f64;
    for i in 0..100 {
        for j in 0..100 {
            let theta = PI * i as f64 / 99.0;
            let phi = 2.0 * PI * j as f64 / 100.0;
            grid_best = grid_best.max(bloch_mi(theta, phi));
        }
    }
    let inst = ProtocolInstance::standard(UnitaryKind::IdentityHadamard, 1, 0).unwrap();
    let ens = honest_ensemble(&inst).unwrap();
    // the library evaluator agrees with the hand formula
    let (t, p): (f64, f64) = (0.3, 1.1);
    let v0 = CVector::from_vec(vec![real((t / 2.0f64).cos()), c(p.cos(), p.sin()) * (t / 2.0f64).sin()]);
    let v1 = CVector::from_vec(vec![-(c(p.cos(), -p.sin()) * (t / 2.0f64).sin()), real((t / 2.0f64).cos())]);
    let mi = info::mutual_information(&ens, &[linalg::outer(&v0), linalg::outer(&v1)]).unwrap();
    assert!((mi - bloch_mi(t, p)).abs() < 1e-12);

    let cfg = SeeSawConfig {
        restarts: 8,
        ..SeeSawConfig::default()
    };
    let est = info::accessible_info_estimate(&ens, &cfg).unwrap();
    assert!((est.lower_bound - grid_best).abs() < 1e-4, "{} vs {grid_best}", est.lower_bound);
    assert!(est.lower_bound <= est.holevo + info::HOLEVO_GATE);
    assert!(est.lower_bound <= 0.5 + 1e-4);
}

#[test]
fn seesaw_stays_below_holevo() {
    for seed in 0..6 {
        let mut rng = rng_for(seed, "seesaw-cap", 0);
        let ens = random::random_ensemble(3, 3, &mut rng).unwrap();
        let cfg = SeeSawConfig {
            restarts: 4,
            iters: 200,
            seed,
            ..SeeSawConfig::default()
        };
        let est = info::accessible_info_estimate(&ens, &cfg).unwrap();
        assert!(est.lower_bound <= est.holevo + info::HOLEVO_GATE);
        assert!((info::mutual_information(&ens, &est.povm).unwrap() - est.lower_bound).abs() < 1e-9);
        // never worse than measuring in the computational basis
        let comp: Vec<CMatrix> = (0..3).map(|i| linalg::projector(3, i)).collect();
        assert!(est.lower_bound >= info::mutual_information(&ens, &comp).unwrap() - 1e-12);
    }
}

#[test]
fn mu_and_fannes_edges() {
    assert_eq!(info::mu(0.0).unwrap(), 0.0);
    assert_eq!(info::fannes_ensemble_bound(0.0, 8).unwrap(), 0.0);
    assert!(info::fannes_ensemble_bound(1.5, 2).is_err());
    let mut prev = 0.0;
    for i in 0..=200 {
        let b = info::fannes_ensemble_bound(i as f64 / 200.0, 4).unwrap();
        assert!(b >= prev);
        prev = b;
    }
}
