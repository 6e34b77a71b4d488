//! Dense complex linear-algebra helpers shared by every module.
//!
//! Register layout convention: a composite index over registers with
//! dimensions `[d0, d1, ..., dk]` is row-major, so the first register is the
//! most significant digit. This matches `kron(a, b)` with `a` first.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{CMatrix, CVector, Error, Result, C64};

/// Eigenvalues in `[-NEG_EIG_TOL, 0)` are clamped to zero; anything below is
/// rejected as a non-positive operator.
pub const NEG_EIG_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_all<'a>(mats: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    mats.into_iter()
        .fold(CMatrix::from_element(1, 1, ONE), |acc, m| acc.kronecker(m))
}

/// `|v><v|`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn basis_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = ONE;
    v
}

pub fn projector(d: usize, i: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, i)] = ONE;
    m
}

/// `(m + m^dagger) / 2`
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Largest entry-wise deviation of `m` from its adjoint.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry-wise deviation of `v^dagger v` from the identity.
pub fn isometry_error(v: &CMatrix) -> f64 {
    let g = v.adjoint() * v;
    max_abs_diff(&g, &identity(v.ncols()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Hermitian eigendecomposition with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

pub fn eigh(m: &CMatrix) -> Result<Eigh> {
    check_square(m)?;
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(hermitize(m), 1e-15, 100_000 + 1000 * n)
        .ok_or_else(|| Error::Numerical("hermitian eigendecomposition did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(Eigh { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Clamp a nominally nonnegative eigenvalue.
pub fn clamp_psd(lambda: f64) -> Result<f64> {
    if lambda < -NEG_EIG_TOL {
        Err(Error::InvalidState(format!("negative eigenvalue {lambda:.3e}")))
    } else {
        Ok(lambda.max(0.0))
    }
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let e = eigh(m)?;
    Ok(spectral_recompose(&e, f))
}

pub fn spectral_recompose(e: &Eigh, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = e.vectors.nrows();
    let mut scaled = e.vectors.clone();
    for (col, &lam) in e.values.iter().enumerate() {
        let fl = f(lam);
        for r in 0..n {
            scaled[(r, col)] *= fl;
        }
    }
    scaled * e.vectors.adjoint()
}

/// Square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let e = eigh(m)?;
    for &l in &e.values {
        clamp_psd(l)?;
    }
    Ok(spectral_recompose(&e, |l| l.max(0.0).sqrt()))
}

/// Pseudo-inverse square root restricted to the support.
pub fn pinv_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let e = eigh(m)?;
    for &l in &e.values {
        clamp_psd(l)?;
    }
    Ok(spectral_recompose(&e, |l| if l < SUPPORT_TOL { 0.0 } else { 1.0 / l.sqrt() }))
}

/// Projector onto the support (eigenvalues above [`SUPPORT_TOL`]).
pub fn support_projector(m: &CMatrix) -> Result<CMatrix> {
    let e = eigh(m)?;
    Ok(spectral_recompose(&e, |l| if l < SUPPORT_TOL { 0.0 } else { 1.0 }))
}

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(eigvalsh(m)?.iter().map(|l| l.abs()).sum())
}

/// Trace norm of an arbitrary matrix: sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

/// Von Neumann entropy (bits) of a spectrum, `0 log 0 = 0`.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &l in values {
        let l = clamp_psd(l)?;
        if l > 0.0 {
            h -= l * l.log2();
        }
    }
    Ok(h)
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(())
}

pub fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Split a composite index into per-register digits.
pub fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

pub fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&g, &d)| acc * d + g)
}

pub fn validate_registers(dims: &[usize], regs: &[usize]) -> Result<()> {
    for (pos, &r) in regs.iter().enumerate() {
        if r >= dims.len() {
            return Err(Error::RegisterOutOfRange {
                index: r,
                count: dims.len(),
            });
        }
        if regs[..pos].contains(&r) {
            return Err(Error::OutOfRange(format!("register {r} listed twice")));
        }
    }
    Ok(())
}

/// Table mapping `(kept, traced)` composite indices to the full index.
///
/// Entry `a * traced_dim + t` is the full index whose kept registers (in the
/// order given by `keep`) spell `a` and whose remaining registers (ascending)
/// spell `t`.
pub fn split_table(dims: &[usize], keep: &[usize]) -> (Vec<usize>, usize, usize) {
    let traced: Vec<usize> = (0..dims.len()).filter(|r| !keep.contains(r)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&r| dims[r]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&r| dims[r]).collect();
    let dk = product(&keep_dims);
    let dt = product(&traced_dims);
    let mut table = vec![0; dk * dt];
    let mut dig = vec![0; dims.len()];
    let mut kd = vec![0; keep.len()];
    let mut td = vec![0; traced.len()];
    for full in 0..dk * dt {
        digits(full, dims, &mut dig);
        for (slot, &r) in kd.iter_mut().zip(keep) {
            *slot = dig[r];
        }
        for (slot, &r) in td.iter_mut().zip(&traced) {
            *slot = dig[r];
        }
        let a = compose(&kd, &keep_dims);
        let t = compose(&td, &traced_dims);
        table[a * dt + t] = full;
    }
    (table, dk, dt)
}

/// Partial trace of an operator over every register not listed in `keep`.
/// Kept registers appear in the order given.
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    validate_registers(dims, keep)?;
    let total = product(dims);
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.nrows(),
        });
    }
    let (table, dk, dt) = split_table(dims, keep);
    let mut out = CMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = ZERO;
            for t in 0..dt {
                acc += m[(table[a * dt + t], table[b * dt + t])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reshape amplitudes into a `kept x traced` coefficient matrix.
pub fn coefficient_matrix(amps: &CVector, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    validate_registers(dims, keep)?;
    let (table, dk, dt) = split_table(dims, keep);
    Ok(CMatrix::from_fn(dk, dt, |a, t| amps[table[a * dt + t]]))
}

/// Reduced operator of a (possibly unnormalised) pure state on `keep`.
pub fn reduce_pure(amps: &CVector, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let coeff = coefficient_matrix(amps, dims, keep)?;
    Ok(&coeff * coeff.adjoint())
}

/// Reorder registers: new register `i` is old register `order[i]`.
pub fn permute_amplitudes(amps: &CVector, dims: &[usize], order: &[usize]) -> Result<(CVector, Vec<usize>)> {
    if order.len() != dims.len() {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            found: order.len(),
        });
    }
    validate_registers(dims, order)?;
    let new_dims: Vec<usize> = order.iter().map(|&r| dims[r]).collect();
    let mut out = CVector::zeros(amps.len());
    let mut old = vec![0; dims.len()];
    let mut new = vec![0; dims.len()];
    for idx in 0..amps.len() {
        digits(idx, dims, &mut old);
        for (slot, &r) in new.iter_mut().zip(order) {
            *slot = old[r];
        }
        out[compose(&new, &new_dims)] = amps[idx];
    }
    Ok((out, new_dims))
}

pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    DMatrix::from_row_slice(rows, cols, data).map(real)
}
