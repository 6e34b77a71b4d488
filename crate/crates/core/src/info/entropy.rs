use std::f64::consts::E;
use std::sync::OnceLock;

use crate::info::Ensemble;
use crate::linalg;
use crate::quantum::{DensityMatrix, QuantumChannel};
use crate::{CMatrix, Error, Result, MAX_OPERATOR_DIM};

/// Von Neumann entropy in bits.
pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    rho.entropy()
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon(&[p, 1.0 - p])
}

/// `chi = H(rho) - sum_x p_x H(rho_x)`
pub fn holevo_chi(ens: &Ensemble) -> Result<f64> {
    let mut h = von_neumann(ens.average())?;
    for (p, s) in ens.priors().iter().zip(ens.states()) {
        if *p > 0.0 {
            h -= p * von_neumann(s)?;
        }
    }
    Ok(h)
}

/// Point below which `-x log2 x` is under `1/e`.
fn mu_knee() -> f64 {
    static KNEE: OnceLock<f64> = OnceLock::new();
    *KNEE.get_or_init(|| {
        // -x log2 x is increasing on (0, 1/e) and exceeds 1/e at x = 1/e
        let target = 1.0 / E;
        let (mut lo, mut hi) = (0.0_f64, 1.0 / E);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if -mid * mid.log2() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// `mu(x) = min{-x log2 x, 1/e}` taken as a nondecreasing cap.
///
/// Below the knee where `-x log2 x` first reaches `1/e` the two agree; above
/// it the value stays at `1/e`. This keeps the Fannes-type bounds monotone in
/// the perturbation size, including the large-`x` region where the literal
/// `-x log2 x` turns negative.
pub fn mu(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::OutOfRange(format!("mu undefined at {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= mu_knee() {
        Ok((-x * x.log2()).min(1.0 / E))
    } else {
        Ok(1.0 / E)
    }
}

/// `4 sqrt(eps) log2 d + 2 mu(2 sqrt(eps))`
pub fn fannes_ensemble_bound(eps: f64, d: usize) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&eps) {
        return Err(Error::OutOfRange(format!("eps = {eps} outside [0, 1]")));
    }
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be positive".into()));
    }
    let r = eps.clamp(0.0, 1.0).sqrt();
    Ok(4.0 * r * (d as f64).log2() + 2.0 * mu(2.0 * r)?)
}

/// Choi state `(1 (x) Lambda)(|psi_d><psi_d|)` on `input (x) output`.
pub fn choi_state(ch: &QuantumChannel) -> Result<DensityMatrix> {
    let d = ch.input_dim();
    let dout = ch.output_dim();
    if d * dout > MAX_OPERATOR_DIM {
        return Err(Error::TooLarge(d * dout, MAX_OPERATOR_DIM));
    }
    let mut m = CMatrix::zeros(d * dout, d * dout);
    let mut unit = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            unit[(i, j)] = linalg::ONE;
            let block = ch.apply_matrix(&unit)? / linalg::real(d as f64);
            unit[(i, j)] = linalg::ZERO;
            m.view_mut((i * dout, j * dout), (dout, dout)).copy_from(&block);
        }
    }
    DensityMatrix::new(linalg::hermitize(&m), vec![d, dout])
}

/// `I(tau; Lambda) = H(tau) + H(Lambda(tau)) - H((1 (x) Lambda) psi_d)` with
/// `tau` maximally mixed on the input.
pub fn channel_mutual_info(ch: &QuantumChannel) -> Result<f64> {
    let d = ch.input_dim();
    let tau = DensityMatrix::maximally_mixed(d);
    let out = ch.apply(&tau)?;
    let choi = choi_state(ch)?;
    Ok((d as f64).log2() + von_neumann(&out)? - von_neumann(&choi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;
    use crate::quantum::StateVector;
    use crate::CVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn mu_values() {
        assert_eq!(mu(0.0).unwrap(), 0.0);
        assert!((mu(0.5).unwrap() - 1.0 / E).abs() < 1e-15);
        assert!((mu(2.0).unwrap() - 1.0 / E).abs() < 1e-15);
        assert!((mu(0.01).unwrap() - (-0.01 * 0.01f64.log2())).abs() < 1e-15);
        assert!(mu(-0.1).is_err());
        // continuous at the knee and capped
        let k = mu_knee();
        assert!((mu(k - 1e-12).unwrap() - mu(k + 1e-12).unwrap()).abs() < 1e-9);
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = mu(i as f64 / 1000.0).unwrap();
            assert!(v <= 1.0 / E + 1e-15);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn fannes_plug_in() {
        assert_eq!(fannes_ensemble_bound(0.0, 4).unwrap(), 0.0);
        assert!((fannes_ensemble_bound(1.0, 2).unwrap() - (4.0 + 2.0 / E)).abs() < 1e-12);
        assert!(fannes_ensemble_bound(1.5, 2).is_err());
    }

    #[test]
    fn holevo_examples() {
        let orth = Ensemble::orthogonal(2).unwrap();
        assert!((holevo_chi(&orth).unwrap() - 2.0).abs() < 1e-12);
        let same = Ensemble::identical(2, &DensityMatrix::maximally_mixed(3)).unwrap();
        assert!(holevo_chi(&same).unwrap().abs() < 1e-12);
        // two-bases qubit ensemble
        let z = DensityMatrix::basis(2, 0).unwrap().into_matrix();
        let plus =
            StateVector::from_vector(CVector::from_vec(vec![real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2)])).unwrap();
        let rho0 = DensityMatrix::single((z + plus.density().into_matrix()) * real(0.5)).unwrap();
        let one = DensityMatrix::basis(2, 1).unwrap().into_matrix();
        let minus =
            StateVector::from_vector(CVector::from_vec(vec![real(FRAC_1_SQRT_2), real(-FRAC_1_SQRT_2)])).unwrap();
        let rho1 = DensityMatrix::single((one + minus.density().into_matrix()) * real(0.5)).unwrap();
        let e = Ensemble::uniform(vec![rho0, rho1]).unwrap();
        let c2 = (PI / 8.0).cos().powi(2);
        let expect = 1.0 - binary_entropy(c2);
        assert!((holevo_chi(&e).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn channel_mi_examples() {
        let id = QuantumChannel::identity(3).unwrap();
        assert!((channel_mutual_info(&id).unwrap() - 2.0 * 3f64.log2()).abs() < 1e-10);
        let dep = QuantumChannel::depolarizing(2, 1.0).unwrap();
        assert!(channel_mutual_info(&dep).unwrap().abs() < 1e-10);
        let deph = QuantumChannel::dephasing(2, 1.0).unwrap();
        assert!((channel_mutual_info(&deph).unwrap() - 1.0).abs() < 1e-10);
    }
}
