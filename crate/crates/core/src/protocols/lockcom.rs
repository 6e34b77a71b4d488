use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::info::Ensemble;
use crate::linalg;
use crate::quantum::{standard_unitaries, DensityMatrix, UnitaryKind, UnitarySet};
use crate::{CMatrix, CVector, Error, Result};

/// `LOCKCOM(n, U)`: commit to `x` by sending `U_r |x>` for a uniformly random `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolInstance {
    unitaries: UnitarySet,
    label: String,
}

impl ProtocolInstance {
    pub fn new(unitaries: UnitarySet, label: impl Into<String>) -> Self {
        Self {
            unitaries,
            label: label.into(),
        }
    }

    /// Instance over one of the standard unitary sets (see [`standard_unitaries`]).
    pub fn standard(kind: UnitaryKind, n_or_d: usize, seed: u64) -> Result<Self> {
        let set = standard_unitaries(kind, n_or_d, seed)?;
        let label = format!("lockcom-{kind}-{n_or_d}");
        Ok(Self::new(set, label))
    }

    pub fn dim(&self) -> usize {
        self.unitaries.dim()
    }

    /// `log2 d`; an integer exactly when `d` is a power of two.
    pub fn n(&self) -> f64 {
        (self.dim() as f64).log2()
    }

    pub fn n_bits(&self) -> Result<usize> {
        let d = self.dim();
        if d.is_power_of_two() {
            Ok(d.trailing_zeros() as usize)
        } else {
            Err(Error::NotPowerOfTwo(d))
        }
    }

    pub fn num_bases(&self) -> usize {
        self.unitaries.len()
    }

    pub fn unitaries(&self) -> &UnitarySet {
        &self.unitaries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn check(&self, x: usize, r: usize) -> Result<()> {
        if x >= self.dim() {
            return Err(Error::OutOfRange(format!("string {x} >= {}", self.dim())));
        }
        if r >= self.num_bases() {
            return Err(Error::OutOfRange(format!("basis index {r} >= {}", self.num_bases())));
        }
        Ok(())
    }

    /// `U_r |x>`
    pub fn encoded(&self, x: usize, r: usize) -> Result<CVector> {
        self.check(x, r)?;
        Ok(self.unitaries.unitaries()[r].column(x).into_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

/// Record of one commit/reveal exchange.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Transcript {
    /// `None` when Bob's state was supplied by a (possibly cheating) Alice.
    pub committed_x: Option<usize>,
    pub r: Option<usize>,
    /// Bob's state after the commit phase.
    pub committed_state: Option<DensityMatrix>,
    pub revealed: Option<(usize, usize)>,
    pub verdict: Option<Verdict>,
    pub accept_probability: Option<f64>,
}

impl Transcript {
    /// Transcript whose commit phase left Bob with an arbitrary state.
    pub fn adversarial(rho_bob: DensityMatrix) -> Self {
        Self {
            committed_state: Some(rho_bob),
            ..Self::default()
        }
    }
}

/// Honest commit phase.
pub fn lockcom_commit(inst: &ProtocolInstance, x: usize, r: usize) -> Result<Transcript> {
    let v = inst.encoded(x, r)?;
    let rho = DensityMatrix::from_parts_unchecked(linalg::outer(&v), vec![inst.dim()]);
    Ok(Transcript {
        committed_x: Some(x),
        r: Some(r),
        committed_state: Some(rho),
        ..Transcript::default()
    })
}

/// `<x| U_r^dagger sigma U_r |x>`
pub fn accept_probability(inst: &ProtocolInstance, sigma: &DensityMatrix, x: usize, r: usize) -> Result<f64> {
    if sigma.dim() != inst.dim() {
        return Err(Error::DimensionMismatch {
            expected: inst.dim(),
            found: sigma.dim(),
        });
    }
    let v = inst.encoded(x, r)?;
    Ok(sigma.expectation(&v).clamp(0.0, 1.0))
}

/// Reveal phase: Bob undoes `U_r`, measures, and accepts iff he sees `x`.
///
/// The exact acceptance probability is recorded; the verdict is sampled from it.
pub fn lockcom_reveal<R: Rng + ?Sized>(
    inst: &ProtocolInstance,
    transcript: &mut Transcript,
    x: usize,
    r: usize,
    rng: &mut R,
) -> Result<Verdict> {
    let sigma = transcript.committed_state.as_ref().ok_or(Error::RevealBeforeCommit)?;
    let p = accept_probability(inst, sigma, x, r)?;
    let verdict = if p >= 1.0 || rng.random::<f64>() < p {
        Verdict::Accept
    } else {
        Verdict::Reject
    };
    transcript.revealed = Some((x, r));
    transcript.accept_probability = Some(p);
    transcript.verdict = Some(verdict);
    Ok(verdict)
}

/// `rho_x = 1/|U| sum_r U_r |x><x| U_r^dagger` with uniform priors.
pub fn honest_ensemble(inst: &ProtocolInstance) -> Result<Ensemble> {
    let d = inst.dim();
    let k = inst.num_bases() as f64;
    let states = (0..d)
        .map(|x| {
            let mut m = CMatrix::zeros(d, d);
            for r in 0..inst.num_bases() {
                m += linalg::outer(&inst.encoded(x, r)?);
            }
            Ok(DensityMatrix::from_parts_unchecked(linalg::hermitize(&(m / linalg::real(k))), vec![d]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(states)
}

/// Which basis index Alice announces for each string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RevealStrategy {
    /// The same `r` for every `x`.
    Constant(usize),
    /// `r = map[x]`.
    PerString(Vec<usize>),
    /// Whichever `r` maximises the acceptance probability of `x`.
    BestPerString,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingAudit {
    /// `sum_{x,r} Tr(|x><x| U_r^dagger rho U_r)`, equal to `|U|`.
    pub upper_bound: f64,
    /// `sum_x p^A_x` under the strategy.
    pub achieved: f64,
    pub num_bases: usize,
    pub chosen_r: Vec<usize>,
}

pub fn binding_audit(inst: &ProtocolInstance, rho_bob: &DensityMatrix, strategy: &RevealStrategy) -> Result<BindingAudit> {
    let d = inst.dim();
    let k = inst.num_bases();
    if rho_bob.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho_bob.dim(),
        });
    }
    // table[x][r]
    let table = (0..d)
        .map(|x| (0..k).map(|r| accept_probability(inst, rho_bob, x, r)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let upper_bound = table.iter().flatten().sum();
    let chosen_r: Vec<usize> = match strategy {
        RevealStrategy::Constant(r) => {
            if *r >= k {
                return Err(Error::OutOfRange(format!("basis index {r} >= {k}")));
            }
            vec![*r; d]
        }
        RevealStrategy::PerString(map) => {
            if map.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: map.len(),
                });
            }
            if let Some(r) = map.iter().find(|&&r| r >= k) {
                return Err(Error::OutOfRange(format!("basis index {r} >= {k}")));
            }
            map.clone()
        }
        RevealStrategy::BestPerString => table
            .iter()
            .map(|row| {
                let mut best = 0;
                for (r, p) in row.iter().enumerate() {
                    if *p > row[best] {
                        best = r;
                    }
                }
                best
            })
            .collect(),
    };
    let achieved = chosen_r.iter().enumerate().map(|(x, &r)| table[x][r]).sum();
    Ok(BindingAudit {
        upper_bound,
        achieved,
        num_bases: k,
        chosen_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info;
    use crate::linalg::{max_abs_diff, real};
    use crate::random;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn ih(n: usize) -> ProtocolInstance {
        ProtocolInstance::standard(UnitaryKind::IdentityHadamard, n, 0).unwrap()
    }

    #[test]
    fn commit_examples() {
        let inst = ih(1);
        let t = lockcom_commit(&inst, 0, 0).unwrap();
        assert!(max_abs_diff(t.committed_state.unwrap().matrix(), &linalg::projector(2, 0)) < 1e-15);
        let t = lockcom_commit(&inst, 0, 1).unwrap();
        let plus = linalg::real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(max_abs_diff(t.committed_state.unwrap().matrix(), &plus) < 1e-15);
        // d = 3 Fourier: F_3 column 1 is (1, w, w^2)/sqrt 3
        let f3 = ProtocolInstance::standard(UnitaryKind::FourierPair, 3, 0).unwrap();
        let v = f3.encoded(1, 1).unwrap();
        for k in 0..3 {
            let ph = 2.0 * PI * k as f64 / 3.0;
            let expect = linalg::c(ph.cos(), ph.sin()) / real(3f64.sqrt());
            assert!((v[k] - expect).norm() < 1e-14);
        }
        assert!(lockcom_commit(&inst, 2, 0).is_err());
        assert!(lockcom_commit(&inst, 0, 2).is_err());
    }

    #[test]
    fn reveal_examples() {
        let inst = ih(1);
        let mut rng = random::rng_for(0, "t", 0);
        let mut t = lockcom_commit(&inst, 1, 0).unwrap();
        assert_eq!(lockcom_reveal(&inst, &mut t, 1, 0, &mut rng).unwrap(), Verdict::Accept);
        assert_eq!(t.accept_probability, Some(1.0));
        let mut t = lockcom_commit(&inst, 0, 0).unwrap();
        lockcom_reveal(&inst, &mut t, 0, 1, &mut rng).unwrap();
        assert!((t.accept_probability.unwrap() - 0.5).abs() < 1e-12);
        let mut t = lockcom_commit(&inst, 0, 0).unwrap();
        assert_eq!(lockcom_reveal(&inst, &mut t, 1, 0, &mut rng).unwrap(), Verdict::Reject);
        assert!(t.accept_probability.unwrap() < 1e-15);
        let mut empty = Transcript::default();
        assert_eq!(
            lockcom_reveal(&inst, &mut empty, 0, 0, &mut rng),
            Err(Error::RevealBeforeCommit)
        );
    }

    #[test]
    fn honest_ensemble_examples() {
        let id = ProtocolInstance::standard(UnitaryKind::Identity, 2, 0).unwrap();
        let e = honest_ensemble(&id).unwrap();
        assert!((info::xi(&e).unwrap() - 2.0).abs() < 1e-12);
        let e = honest_ensemble(&ih(1)).unwrap();
        let h = FRAC_1_SQRT_2;
        let rho0 = linalg::real_matrix(2, 2, &[0.75, 0.25, 0.25, 0.25]);
        assert!(max_abs_diff(e.states()[0].matrix(), &rho0) < 1e-15);
        assert!(h > 0.0);
        let e3 = honest_ensemble(&ih(3)).unwrap();
        assert!(max_abs_diff(e3.average().matrix(), DensityMatrix::maximally_mixed(8).matrix()) < 1e-14);
    }

    #[test]
    fn binding_examples() {
        let inst = ih(2);
        let t = lockcom_commit(&inst, 3, 1).unwrap();
        let audit = binding_audit(&inst, t.committed_state.as_ref().unwrap(), &RevealStrategy::Constant(1)).unwrap();
        assert!((audit.upper_bound - 2.0).abs() < 1e-12);
        assert!((audit.achieved - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4);
        let audit = binding_audit(&inst, &mixed, &RevealStrategy::BestPerString).unwrap();
        assert!(audit.achieved <= 2.0 + 1e-12);
        assert!(binding_audit(&inst, &DensityMatrix::maximally_mixed(2), &RevealStrategy::Constant(0)).is_err());
    }
}
