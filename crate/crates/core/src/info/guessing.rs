use serde::{Deserialize, Serialize};

use crate::info::Ensemble;
use crate::linalg::{self, real};
use crate::{CMatrix, Error, Result};

const POVM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessStrategy {
    SquareRoot,
    Exhaustive,
    CustomPovm,
}

/// Outcome of a guessing measurement on an ensemble.
#[derive(Debug, Clone)]
pub struct GuessReport {
    pub strategy: GuessStrategy,
    /// Element `x` announces the guess `x`.
    pub povm: Vec<CMatrix>,
    /// Completion outcome that matches no label (zero when unused).
    pub reject: CMatrix,
    pub success_probability: f64,
    /// `p(guess = x | x)`
    pub per_string: Vec<f64>,
}

/// `Tr[((1 (x) rho^{-1/2}) rho_AB)^2] = sum_x p_x^2 Tr[(rho^{-1/2} rho_x)^2]`
pub fn collision_trace(ens: &Ensemble) -> Result<f64> {
    let s = linalg::pinv_sqrt(ens.average().matrix())?;
    let mut total = 0.0;
    for (p, rho) in ens.priors().iter().zip(ens.states()) {
        if *p == 0.0 {
            continue;
        }
        let a = &s * rho.matrix() * &s;
        // Tr(A rho) with A = S rho_x S
        let t = (a * rho.matrix()).trace().re;
        total += p * p * t;
    }
    Ok(total)
}

/// `H_2(rho_AB | rho) = -log2 Tr[((1 (x) rho^{-1/2}) rho_AB)^2]`
pub fn collision_conditional_entropy(ens: &Ensemble) -> Result<f64> {
    let t = collision_trace(ens)?;
    if t <= 0.0 {
        return Err(Error::Numerical(format!("collision trace {t} not positive")));
    }
    Ok(-t.log2())
}

/// `xi(E) = n - H_2(rho_AB | rho)`
pub fn xi(ens: &Ensemble) -> Result<f64> {
    let n = ens.n_bits()?;
    Ok(n as f64 - collision_conditional_entropy(ens)?)
}

/// Square-root measurement `M_x = p_x rho^{-1/2} rho_x rho^{-1/2}`, completed
/// on the kernel of `rho` by a reject outcome.
pub fn srm_guess(ens: &Ensemble) -> Result<GuessReport> {
    let avg = ens.average().matrix();
    let s = linalg::pinv_sqrt(avg)?;
    let povm: Vec<CMatrix> = ens
        .priors()
        .iter()
        .zip(ens.states())
        .map(|(p, rho)| linalg::hermitize(&(&s * rho.matrix() * &s * real(*p))))
        .collect();
    let d = ens.dim();
    let reject = linalg::identity(d) - linalg::support_projector(avg)?;
    report(ens, GuessStrategy::SquareRoot, povm, reject)
}

/// Evaluate a guessing POVM; elements past the ensemble size count as reject.
pub fn guess_with_povm(ens: &Ensemble, mut povm: Vec<CMatrix>, strategy: GuessStrategy) -> Result<GuessReport> {
    let d = ens.dim();
    if povm.len() < ens.len() {
        return Err(Error::DimensionMismatch {
            expected: ens.len(),
            found: povm.len(),
        });
    }
    let mut reject = CMatrix::zeros(d, d);
    for extra in povm.drain(ens.len()..) {
        reject += extra;
    }
    for m in &povm {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.nrows(),
            });
        }
    }
    report(ens, strategy, povm, reject)
}

fn report(ens: &Ensemble, strategy: GuessStrategy, povm: Vec<CMatrix>, reject: CMatrix) -> Result<GuessReport> {
    let d = ens.dim();
    let mut sum = reject.clone();
    for m in povm.iter() {
        let min = linalg::eigvalsh(m)?.last().copied().unwrap_or(0.0);
        if min < -POVM_TOL {
            return Err(Error::InvalidState(format!("POVM element has eigenvalue {min:.3e}")));
        }
        sum += m;
    }
    let err = linalg::max_abs_diff(&sum, &linalg::identity(d));
    if err > POVM_TOL {
        return Err(Error::InvalidState(format!("POVM incomplete (deviation {err:.3e})")));
    }
    let per_string: Vec<f64> = povm
        .iter()
        .zip(ens.states())
        .map(|(m, rho)| (m * rho.matrix()).trace().re)
        .collect();
    let success_probability = per_string.iter().zip(ens.priors()).map(|(q, p)| p * q).sum();
    Ok(GuessReport {
        strategy,
        povm,
        reject,
        success_probability,
        per_string,
    })
}

/// Optimal guessing of a two-member ensemble: projector on the positive part
/// of `p_0 rho_0 - p_1 rho_1`; success `(1 + ||p_0 rho_0 - p_1 rho_1||_1) / 2`.
pub fn helstrom_guess(ens: &Ensemble) -> Result<GuessReport> {
    if ens.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ens.len(),
        });
    }
    let p = ens.priors();
    let s = ens.states();
    let gamma = s[0].matrix() * real(p[0]) - s[1].matrix() * real(p[1]);
    let e = linalg::eigh(&gamma)?;
    let pos = linalg::spectral_recompose(&e, |l| if l > 0.0 { 1.0 } else { 0.0 });
    let neg = linalg::identity(ens.dim()) - &pos;
    let d = ens.dim();
    report(ens, GuessStrategy::Exhaustive, vec![pos, neg], CMatrix::zeros(d, d))
}

/// `d(E) = delta(rho_AB, 1/N (x) rho) = 1/2 sum_x ||p_x rho_x - rho/N||_1`
pub fn ensemble_uniformity_distance(ens: &Ensemble) -> Result<f64> {
    ens.n_bits()?;
    uniformity_distance_any(ens)
}

/// Same quantity without requiring a power-of-two label set.
pub fn uniformity_distance_any(ens: &Ensemble) -> Result<f64> {
    let n = ens.len() as f64;
    let avg = ens.average().matrix() / real(n);
    let mut total = 0.0;
    for (p, rho) in ens.priors().iter().zip(ens.states()) {
        let block = rho.matrix() * real(*p) - &avg;
        total += linalg::trace_norm_hermitian(&block)?;
    }
    Ok((0.5 * total).min(1.0))
}
