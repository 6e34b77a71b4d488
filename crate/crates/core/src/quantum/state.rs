use std::fmt;

use crate::linalg::{self, ONE};
use crate::{CMatrix, CVector, Error, Result, MAX_OPERATOR_DIM, MAX_STATE_DIM};

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Normalised pure state over an ordered list of registers.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    register_dims: Vec<usize>,
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateVector")
            .field("register_dims", &self.register_dims)
            .field("amplitudes", &self.amplitudes.as_slice())
            .finish()
    }
}

fn check_dims(register_dims: &[usize], len: usize, cap: usize) -> Result<()> {
    if register_dims.is_empty() || register_dims.contains(&0) {
        return Err(Error::InvalidState("register dimensions must be positive".into()));
    }
    let total = linalg::product(register_dims);
    if total != len {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: len,
        });
    }
    if total > cap {
        return Err(Error::TooLarge(total, cap));
    }
    Ok(())
}

impl StateVector {
    pub fn new(amplitudes: CVector, register_dims: Vec<usize>) -> Result<Self> {
        check_dims(&register_dims, amplitudes.len(), MAX_STATE_DIM)?;
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm2} != 1")));
        }
        Ok(Self {
            amplitudes,
            register_dims,
        })
    }

    /// Normalise the vector first; fails only on a zero vector.
    pub fn normalized(amplitudes: CVector, register_dims: Vec<usize>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amplitudes.unscale(norm), register_dims)
    }

    /// Single-register state.
    pub fn from_vector(amplitudes: CVector) -> Result<Self> {
        let d = amplitudes.len();
        Self::new(amplitudes, vec![d])
    }

    /// Computational basis state `|digits>` across the given registers.
    pub fn basis(register_dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != register_dims.len() {
            return Err(Error::DimensionMismatch {
                expected: register_dims.len(),
                found: digits.len(),
            });
        }
        if let Some((&g, &d)) = digits.iter().zip(&register_dims).find(|(g, d)| g >= d) {
            return Err(Error::OutOfRange(format!("digit {g} >= dimension {d}")));
        }
        let total = linalg::product(&register_dims);
        let mut v = CVector::zeros(total);
        v[linalg::compose(digits, &register_dims)] = ONE;
        Self::new(v, register_dims)
    }

    pub(crate) fn from_parts_unchecked(amplitudes: CVector, register_dims: Vec<usize>) -> Self {
        debug_assert_eq!(linalg::product(&register_dims), amplitudes.len());
        Self {
            amplitudes,
            register_dims,
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn register_dims(&self) -> &[usize] {
        &self.register_dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let dims = [self.register_dims.clone(), other.register_dims.clone()].concat();
        check_dims(&dims, self.dim() * other.dim(), MAX_STATE_DIM)?;
        Ok(Self::from_parts_unchecked(
            self.amplitudes.kronecker(&other.amplitudes),
            dims,
        ))
    }

    pub fn inner(&self, other: &StateVector) -> Result<crate::C64> {
        if self.register_dims != other.register_dims {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(linalg::outer(&self.amplitudes), self.register_dims.clone())
    }

    /// Reduced state on `keep` (registers in the order listed).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = linalg::reduce_pure(&self.amplitudes, &self.register_dims, keep)?;
        let dims = keep.iter().map(|&r| self.register_dims[r]).collect();
        Ok(DensityMatrix::from_parts_unchecked(m, dims))
    }

    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        let (amps, dims) = linalg::permute_amplitudes(&self.amplitudes, &self.register_dims, order)?;
        Ok(Self::from_parts_unchecked(amps, dims))
    }

    /// Apply `op` (mapping the joint space of `targets` onto `out_dims`).
    ///
    /// The result lists the untouched registers first in their original
    /// order, followed by the `out_dims` registers. `op` must be an isometry
    /// for the result to stay normalised.
    pub fn apply(&self, op: &CMatrix, targets: &[usize], out_dims: &[usize]) -> Result<StateVector> {
        linalg::validate_registers(&self.register_dims, targets)?;
        let target_dim: usize = targets.iter().map(|&r| self.register_dims[r]).product();
        let out_dim = linalg::product(out_dims);
        if op.ncols() != target_dim || op.nrows() != out_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: op.ncols(),
            });
        }
        let rest: Vec<usize> = (0..self.register_dims.len())
            .filter(|r| !targets.contains(r))
            .collect();
        // rows: targets in the order given, cols: rest
        let coeff = linalg::coefficient_matrix(&self.amplitudes, &self.register_dims, targets)?;
        let new = op * coeff;
        let mut dims: Vec<usize> = rest.iter().map(|&r| self.register_dims[r]).collect();
        dims.extend_from_slice(out_dims);
        let total = linalg::product(&dims);
        if total > MAX_STATE_DIM {
            return Err(Error::TooLarge(total, MAX_STATE_DIM));
        }
        let amps = CVector::from_fn(total, |i, _| new[(i % out_dim, i / out_dim)]);
        let norm2 = amps.norm_squared();
        if (norm2 - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidState(format!(
                "operator is not norm preserving on this state (|psi|^2 = {norm2})"
            )));
        }
        Ok(Self::from_parts_unchecked(amps, dims))
    }

    /// Apply a square operator on `targets`, keeping the register order.
    pub fn apply_local(&self, op: &CMatrix, targets: &[usize]) -> Result<StateVector> {
        let target_dims: Vec<usize> = targets.iter().map(|&r| self.register_dims.get(r).copied().unwrap_or(0)).collect();
        let out = self.apply(op, targets, &target_dims)?;
        // out order: rest..., targets...; restore original
        let rest: Vec<usize> = (0..self.register_dims.len())
            .filter(|r| !targets.contains(r))
            .collect();
        let current: Vec<usize> = rest.iter().chain(targets).copied().collect();
        let order: Vec<usize> = (0..current.len())
            .map(|orig| current.iter().position(|&c| c == orig).unwrap())
            .collect();
        out.permute(&order)
    }

    /// Condition on computational-basis outcomes of some registers.
    ///
    /// Returns the outcome probability and the normalised post-measurement
    /// state on the remaining registers (original order), or `None` when the
    /// outcome has zero probability.
    pub fn condition(&self, outcomes: &[(usize, usize)]) -> Result<(f64, Option<StateVector>)> {
        let regs: Vec<usize> = outcomes.iter().map(|&(r, _)| r).collect();
        linalg::validate_registers(&self.register_dims, &regs)?;
        for &(r, v) in outcomes {
            if v >= self.register_dims[r] {
                return Err(Error::OutOfRange(format!("outcome {v} on register {r}")));
            }
        }
        let cond_dims: Vec<usize> = regs.iter().map(|&r| self.register_dims[r]).collect();
        let values: Vec<usize> = outcomes.iter().map(|&(_, v)| v).collect();
        let row = linalg::compose(&values, &cond_dims);
        let rest: Vec<usize> = (0..self.register_dims.len())
            .filter(|r| !regs.contains(r))
            .collect();
        let coeff = linalg::coefficient_matrix(&self.amplitudes, &self.register_dims, &regs)?;
        let slice = coeff.row(row).transpose();
        let prob = slice.norm_squared();
        if prob < 1e-300 {
            return Ok((prob, None));
        }
        let dims: Vec<usize> = if rest.is_empty() {
            vec![1]
        } else {
            rest.iter().map(|&r| self.register_dims[r]).collect()
        };
        Ok((prob, Some(Self::from_parts_unchecked(slice.unscale(prob.sqrt()), dims))))
    }
}

/// Density operator over an ordered list of registers.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    register_dims: Vec<usize>,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMatrix")
            .field("register_dims", &self.register_dims)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, register_dims: Vec<usize>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dims(&register_dims, matrix.nrows(), MAX_OPERATOR_DIM)?;
        let herm = linalg::hermiticity_error(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = linalg::eigvalsh(&matrix)?.last().copied().unwrap_or(0.0);
        linalg::clamp_psd(min)?;
        Ok(Self {
            matrix,
            register_dims,
        })
    }

    pub fn single(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(matrix, vec![d])
    }

    /// Rescales by the trace before validating.
    pub fn normalized(matrix: CMatrix, register_dims: Vec<usize>) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 1e-300 {
            return Err(Error::InvalidState("zero trace".into()));
        }
        Self::new(linalg::hermitize(&matrix).unscale(tr), register_dims)
    }

    pub(crate) fn from_parts_unchecked(matrix: CMatrix, register_dims: Vec<usize>) -> Self {
        debug_assert_eq!(linalg::product(&register_dims), matrix.nrows());
        Self {
            matrix,
            register_dims,
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_parts_unchecked(linalg::identity(d).unscale(d as f64), vec![d])
    }

    pub fn pure(state: &StateVector) -> Self {
        state.density()
    }

    /// `|i><i|` on a single register of dimension `d`.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::OutOfRange(format!("basis index {i} >= {d}")));
        }
        Ok(Self::from_parts_unchecked(linalg::projector(d, i), vec![d]))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn register_dims(&self) -> &[usize] {
        &self.register_dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Treat the whole space as one register.
    pub fn flattened(&self) -> DensityMatrix {
        Self::from_parts_unchecked(self.matrix.clone(), vec![self.dim()])
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let dims = [self.register_dims.clone(), other.register_dims.clone()].concat();
        check_dims(&dims, self.dim() * other.dim(), MAX_OPERATOR_DIM)?;
        Ok(Self::from_parts_unchecked(
            self.matrix.kronecker(&other.matrix),
            dims,
        ))
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = linalg::partial_trace_matrix(&self.matrix, &self.register_dims, keep)?;
        let dims = keep.iter().map(|&r| self.register_dims[r]).collect();
        Ok(Self::from_parts_unchecked(m, dims))
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::eigvalsh(&self.matrix)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        linalg::entropy_of_spectrum(&self.eigenvalues()?)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `U rho U^dagger`
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.ncols() != self.dim() || u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.ncols(),
            });
        }
        Ok(Self::from_parts_unchecked(
            u * &self.matrix * u.adjoint(),
            self.register_dims.clone(),
        ))
    }

    /// `<v| rho |v>`
    pub fn expectation(&self, v: &CVector) -> f64 {
        v.dotc(&(&self.matrix * v)).re
    }

    /// Canonical purification on `[d] ++ register_dims`: the first register
    /// purifies, eigenvalues sorted descending.
    pub fn purify(&self) -> Result<StateVector> {
        let e = linalg::eigh(&self.matrix)?;
        let d = self.dim();
        let mut amps = CVector::zeros(d * d);
        for (i, &lam) in e.values.iter().enumerate() {
            let w = linalg::clamp_psd(lam)?.sqrt();
            if w == 0.0 {
                continue;
            }
            for b in 0..d {
                amps[i * d + b] = e.vectors[(b, i)] * w;
            }
        }
        let mut dims = vec![d];
        dims.extend_from_slice(&self.register_dims);
        StateVector::normalized(amps, dims)
    }
}

/// Kronecker product of two pure states.
pub fn tensor_states(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

/// Kronecker product of two density matrices.
pub fn tensor_densities(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    a.tensor(b)
}
