use crate::linalg;
use crate::quantum::{DensityMatrix, StateVector};
use crate::{CMatrix, Error, Result};

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `1/2 ||rho - sigma||_1`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    Ok((0.5 * linalg::trace_norm_hermitian(&diff)?).clamp(0.0, 1.0))
}

/// Trace distance between arbitrary Hermitian operators (no normalisation).
pub fn trace_distance_matrices(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(0.5 * linalg::trace_norm_hermitian(&(a - b))?)
}

/// `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, computed as `||sqrt(rho) sqrt(sigma)||_1`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let a = linalg::psd_sqrt(rho.matrix())?;
    let b = linalg::psd_sqrt(sigma.matrix())?;
    Ok(linalg::trace_norm(&(a * b)).clamp(0.0, 1.0))
}

/// Result of the Uhlmann optimisation.
#[derive(Debug, Clone)]
pub struct Uhlmann {
    /// Unitary on the local registers (in the order they were listed).
    pub unitary: CMatrix,
    /// `|<phi0| (U (x) 1) |phi1>|`
    pub overlap: f64,
}

/// Local unitary maximising `|<phi0| (U (x) 1) |phi1>|`.
///
/// With `A_i` the coefficient matrices of the two states (local rows,
/// remaining columns), the overlap is `|Tr(U A1 A0^dagger)|`; the SVD
/// `A1 A0^dagger = W S V^dagger` gives the maximiser `U = V W^dagger` and the
/// optimum `sum(S)`.
pub fn uhlmann_unitary(phi0: &StateVector, phi1: &StateVector, local: &[usize]) -> Result<Uhlmann> {
    if phi0.register_dims() != phi1.register_dims() {
        return Err(Error::DimensionMismatch {
            expected: phi0.dim(),
            found: phi1.dim(),
        });
    }
    if local.is_empty() {
        return Err(Error::OutOfRange("no local registers".into()));
    }
    let dims = phi0.register_dims();
    let a0 = linalg::coefficient_matrix(phi0.amplitudes(), dims, local)?;
    let a1 = linalg::coefficient_matrix(phi1.amplitudes(), dims, local)?;
    let m = &a1 * a0.adjoint();
    let svd = m.svd(true, true);
    let w = svd.u.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let unitary = v_t.adjoint() * w.adjoint();
    let overlap = svd.singular_values.iter().sum::<f64>().min(1.0);
    Ok(Uhlmann { unitary, overlap })
}
