use std::time::Instant;

use proptest::prelude::*;
use qbsc_core::hashing::{self, HashFamily};
use qbsc_core::info::{self, Ensemble, SeeSawConfig};
use qbsc_core::linalg::{self, real};
use qbsc_core::protocols::{
    self, alice_attack, binding_audit, honest_ensemble, lockcom_commit, lockcom_reveal, ClassicalPrefix,
    ProtocolInstance, RevealStrategy, Verdict, GAMMA_DEFAULT,
};
use qbsc_core::quantum::{self, DensityMatrix, UnitaryKind};
use qbsc_core::random::{self, rng_for};
use qbsc_core::{CMatrix, Transcript};

fn ih(n: usize) -> ProtocolInstance {
    ProtocolInstance::standard(UnitaryKind::IdentityHadamard, n, 0).unwrap()
}

/// `1/2 || rho_YB - 1/2^s (x) rho_B ||_1` from the block-diagonal joint state,
/// with the hash evaluated by schoolbook carry-less multiplication.
fn pa_oracle(ens: &Ensemble, n: usize, s: usize, key: u32) -> f64 {
    let poly = hashing::IRREDUCIBLE_POLYS[n];
    let mul = |a: u32, b: u32| {
        let mut wide = 0u64;
        for i in 0..n {
            if (b >> i) & 1 == 1 {
                wide ^= (a as u64) << i;
            }
        }
        for i in (n..2 * n).rev() {
            if (wide >> i) & 1 == 1 {
                wide ^= (poly as u64) << (i - n);
            }
        }
        wide as u32
    };
    let d = ens.dim();
    let labels = 1usize << s;
    let mut blocks = vec![CMatrix::zeros(d, d); labels];
    for (x, (p, rho)) in ens.priors().iter().zip(ens.states()).enumerate() {
        let y = (mul(key, x as u32) >> (n - s)) as usize;
        blocks[y] += rho.matrix() * real(*p);
    }
    let avg = ens.average().matrix() / real(labels as f64);
    blocks
        .iter()
        .map(|b| (b - &avg).svd(false, false).singular_values.iter().sum::<f64>())
        .sum::<f64>()
        * 0.5
}

#[test]
fn honest_runs_always_accept() {
    let mut instances = vec![ih(1), ih(3), ProtocolInstance::standard(UnitaryKind::FourierPair, 3, 0).unwrap()];
    instances.push(ProtocolInstance::standard(UnitaryKind::Haar(4), 4, 9).unwrap());
    instances.push(ProtocolInstance::standard(UnitaryKind::Identity, 2, 0).unwrap());
    let mut rng = rng_for(1, "completeness", 0);
    for inst in &instances {
        for x in 0..inst.dim() {
            for r in 0..inst.num_bases() {
                let mut t = lockcom_commit(inst, x, r).unwrap();
                assert_eq!(lockcom_reveal(inst, &mut t, x, r, &mut rng).unwrap(), Verdict::Accept);
                assert!((t.accept_probability.unwrap() - 1.0).abs() < 1e-12, "{} x={x} r={r}", inst.label());
            }
        }
    }
    let inst = ih(2);
    let mut empty = Transcript::default();
    assert!(lockcom_reveal(&inst, &mut empty, 0, 0, &mut rng).is_err());
    // lying about x is caught in the computational basis
    let mut t = lockcom_commit(&inst, 1, 0).unwrap();
    assert_eq!(lockcom_reveal(&inst, &mut t, 2, 0, &mut rng).unwrap(), Verdict::Reject);
}

#[test]
fn binding_sum_equals_number_of_bases() {
    for (kind, n) in [
        (UnitaryKind::Identity, 3),
        (UnitaryKind::IdentityHadamard, 6),
        (UnitaryKind::Haar(4), 16),
    ] {
        let inst = ProtocolInstance::standard(kind, n, 3).unwrap();
        let d = inst.dim();
        for i in 0..34 {
            let mut rng = rng_for(7, "binding", i);
            let rank = 1 + (i as usize % d);
            let rho = random::random_density(d, rank, &mut rng).unwrap();
            let audit = binding_audit(&inst, &rho, &RevealStrategy::BestPerString).unwrap();
            assert!((audit.upper_bound - inst.num_bases() as f64).abs() < 1e-9);
            assert!(audit.achieved <= audit.upper_bound + 1e-12);
        }
        // honest commitment to x0 with basis r0: only x0 opens
        let t = lockcom_commit(&inst, 1, 0).unwrap();
        let honest = binding_audit(&inst, t.committed_state.as_ref().unwrap(), &RevealStrategy::Constant(0)).unwrap();
        assert!((honest.achieved - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn privacy_amplification_holds(seed in any::<u64>(), n in 2usize..5, d in 1usize..4) {
        let mut rng = rng_for(seed, "pa", 0);
        let ens = random::random_ensemble(1 << n, d, &mut rng).unwrap();
        for s in 0..=n {
            let fam = HashFamily::full(n, s).unwrap();
            let pa = hashing::pa_average_distance(&ens, s, &fam).unwrap();
            prop_assert!(pa.holds(1e-9), "n={} s={} {:?}", n, s, pa);
            let ds = hashing::family_distances(&ens, &fam).unwrap();
            for (g, dist) in fam.members().iter().zip(&ds).take(5) {
                prop_assert!((dist - pa_oracle(&ens, n, s, g.key())).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn two_basis_ensemble_is_amplified() {
    let inst = ih(4);
    let ens = honest_ensemble(&inst).unwrap();
    for s in 0..=4 {
        let pa = hashing::pa_average_distance(&ens, s, &HashFamily::full(4, s).unwrap()).unwrap();
        assert!(pa.holds(1e-9), "{pa:?}");
    }
}

#[test]
fn attack_bound_flagged_when_vacuous() {
    let t = Instant::now();
    let inst = ih(6);
    let r = alice_attack(&inst, 3.0, GAMMA_DEFAULT, 0).unwrap();
    assert!(r.gamma_clamped);
    assert_eq!(r.m, 3);
    assert!(r.bound_vacuous && r.soundness_bound <= 0.0);
    assert!(r.pass);
    assert!(r.uhlmann_steps.iter().all(|s| s.pass && s.success >= s.step_bound - 1e-6));
    assert!((r.total_success - r.per_x_success.iter().sum::<f64>()).abs() < 1e-12);
    // Alice can open several strings, but never more than the binding sum allows
    assert!(r.total_success >= 1.0 - 1e-9);
    assert!(r.total_success <= inst.num_bases() as f64 + 1e-9);
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn attack_bound_is_met_when_positive() {
    // a classical prefix commitment hides n - b bits perfectly
    let scheme = ClassicalPrefix::new(8, 1).unwrap();
    let r = alice_attack(&scheme, 1.0, 6.5, 0).unwrap();
    assert_eq!((r.m, r.s), (8, 0));
    let scheme = ClassicalPrefix::new(7, 1).unwrap();
    let r = alice_attack(&scheme, 1.0, 4.5, 0).unwrap();
    assert!(!r.bound_vacuous);
    assert!(r.total_success >= r.soundness_bound - 1e-6, "{} < {}", r.total_success, r.soundness_bound);
    assert!(r.pass);
    assert!(r.premise_holds);
}

#[test]
fn attack_rejects_oversized_m() {
    let err = alice_attack(&ih(4), 4.0, GAMMA_DEFAULT, 0).unwrap_err();
    assert!(matches!(err, qbsc_core::Error::MExceedsN { .. }));
}

#[test]
fn cheat_family_endpoints() {
    for kind in protocols::CheatKind::ALL {
        for d in [2, 3, 4] {
            let honest = protocols::run_cheat_scenario(&protocols::bob_cheat_family(kind, 0.0, d).unwrap()).unwrap();
            assert!(honest.epsilon.abs() < 1e-12);
            assert!(honest.chi_c <= 1e-6);
            let full = protocols::run_cheat_scenario(
                &protocols::bob_cheat_family(kind, std::f64::consts::FRAC_PI_2, d).unwrap(),
            )
            .unwrap();
            assert!(full.pass, "{kind} d={d}: {full:?}");
            assert!(full.chi_c > 0.0 && full.epsilon > 0.0, "{kind} d={d}");
        }
    }
}

#[test]
fn cheat_outcome_first_string_state() {
    // partial measurement at full strength returns |x> or a Fourier-dephased state
    let sc = protocols::bob_cheat_family(protocols::CheatKind::PartialMeasure, std::f64::consts::FRAC_PI_2, 2).unwrap();
    let rho = protocols::returned_state(&sc, 0).unwrap();
    let expect = DensityMatrix::single(linalg::real_matrix(2, 2, &[0.75, 0.0, 0.0, 0.25])).unwrap();
    assert!(quantum::trace_distance(&rho, &expect).unwrap() < 1e-12);
}

#[test]
fn two_bases_lock_half_the_string() {
    let cfg = SeeSawConfig {
        restarts: 8,
        iters: 400,
        ..SeeSawConfig::default()
    };
    for n in 1..=2 {
        let r = protocols::locking_report(&ih(n), &cfg).unwrap();
        assert!(r.iacc_lower_bound <= n as f64 / 2.0 + 1e-4, "{r:?}");
        let d = 1 << n;
        let comp: Vec<CMatrix> = (0..d).map(|i| linalg::projector(d, i)).collect();
        let ens = honest_ensemble(&ih(n)).unwrap();
        assert!(r.iacc_lower_bound >= info::mutual_information(&ens, &comp).unwrap() - 1e-12);
        assert!((r.chi - info::holevo_chi(&honest_ensemble(&ih(n)).unwrap()).unwrap()).abs() < 1e-12);
        assert_eq!(r.binding_a, 1.0);
    }
}
