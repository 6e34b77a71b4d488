use rand::Rng;

use crate::linalg::{self, real};
use crate::quantum::{unitary, DensityMatrix};
use crate::{random, CMatrix, Error, Result, MAX_OPERATOR_DIM};

const TP_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
    /// Stinespring isometry (rows ordered output-major, environment-minor)
    /// and the environment dimension.
    stinespring: Option<(CMatrix, usize)>,
}

impl QuantumChannel {
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidState("channel with no Kraus operators".into()))?;
        let (d_out, d_in) = (first.nrows(), first.ncols());
        if d_in.max(d_out) > MAX_OPERATOR_DIM {
            return Err(Error::TooLarge(d_in.max(d_out), MAX_OPERATOR_DIM));
        }
        let mut sum = CMatrix::zeros(d_in, d_in);
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::DimensionMismatch {
                    expected: d_in,
                    found: k.ncols(),
                });
            }
            sum += k.adjoint() * k;
        }
        let err = linalg::max_abs_diff(&sum, &linalg::identity(d_in));
        if err > TP_TOL {
            return Err(Error::NotTracePreserving(err));
        }
        Ok(Self {
            kraus,
            d_in,
            d_out,
            stinespring: None,
        })
    }

    /// Channel `rho -> Tr_env V rho V^dagger` for an isometry whose output
    /// space is `out (x) env` (output register first).
    pub fn from_isometry(v: CMatrix, out_dim: usize, env_dim: usize) -> Result<Self> {
        if v.nrows() != out_dim * env_dim {
            return Err(Error::DimensionMismatch {
                expected: out_dim * env_dim,
                found: v.nrows(),
            });
        }
        let err = linalg::isometry_error(&v);
        if err > TP_TOL {
            return Err(Error::NotTracePreserving(err));
        }
        let d_in = v.ncols();
        let kraus = (0..env_dim)
            .map(|e| CMatrix::from_fn(out_dim, d_in, |o, i| v[(o * env_dim + e, i)]))
            .collect();
        let mut ch = Self::from_kraus(kraus)?;
        ch.stinespring = Some((v, env_dim));
        Ok(ch)
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::from_kraus(vec![linalg::identity(d)])
    }

    /// `rho -> (1-p) rho + p 1/d`, via the `d^2` clock-and-shift operators.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("depolarizing strength {p}")));
        }
        let x = unitary::shift(d);
        let z = unitary::clock(d);
        let dd = (d * d) as f64;
        let mut kraus = Vec::with_capacity(d * d);
        let mut xa = linalg::identity(d);
        for a in 0..d {
            let mut zb = linalg::identity(d);
            for b in 0..d {
                let w = if a == 0 && b == 0 { 1.0 - p + p / dd } else { p / dd };
                if w > 0.0 {
                    kraus.push(&xa * &zb * real(w.sqrt()));
                }
                zb = &zb * &z;
            }
            xa = &xa * &x;
        }
        Self::from_kraus(kraus)
    }

    /// Kraus operators `sqrt(1-p) 1` and `sqrt(p) |i><i|`.
    pub fn dephasing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("dephasing strength {p}")));
        }
        let mut kraus = vec![linalg::identity(d) * real((1.0 - p).sqrt())];
        for i in 0..d {
            kraus.push(linalg::projector(d, i) * real(p.sqrt()));
        }
        Self::from_kraus(kraus)
    }

    /// Random channel with `rank` Kraus operators from a Haar-like isometry.
    pub fn random<R: Rng + ?Sized>(d_in: usize, d_out: usize, rank: usize, rng: &mut R) -> Result<Self> {
        if rank == 0 || d_out * rank < d_in {
            return Err(Error::OutOfRange(format!(
                "Kraus rank {rank} too small for {d_in} -> {d_out}"
            )));
        }
        let v = random::random_isometry(d_out * rank, d_in, rng)?;
        Self::from_isometry(v, d_out, rank)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    pub fn stinespring(&self) -> Option<(&CMatrix, usize)> {
        self.stinespring.as_ref().map(|(v, e)| (v, *e))
    }

    /// Stinespring isometry, synthesised from the Kraus form when needed.
    pub fn isometry(&self) -> (CMatrix, usize) {
        if let Some((v, e)) = &self.stinespring {
            return (v.clone(), *e);
        }
        let r = self.kraus.len();
        let v = CMatrix::from_fn(self.d_out * r, self.d_in, |row, i| self.kraus[row % r][(row / r, i)]);
        (v, r)
    }

    /// The channel to the environment.
    pub fn complementary(&self) -> Result<Self> {
        let (v, e) = self.isometry();
        let d_out = self.d_out;
        let d_in = self.d_in;
        // swap output and environment factors
        let swapped = CMatrix::from_fn(e * d_out, d_in, |row, i| v[((row % d_out) * e + row / d_out, i)]);
        Self::from_isometry(swapped, e, d_out)
    }

    pub fn apply_matrix(&self, m: &CMatrix) -> Result<CMatrix> {
        if m.nrows() != self.d_in || m.ncols() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: m.nrows(),
            });
        }
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * m * k.adjoint();
        }
        Ok(out)
    }

    /// Output state on a single register of dimension `output_dim`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityMatrix::from_parts_unchecked(linalg::hermitize(&out), vec![self.d_out]))
    }

    /// `(1 (x) Lambda)` applied to an operator on `other (x) input`.
    pub fn apply_on_second(&self, m: &CMatrix, other_dim: usize) -> Result<CMatrix> {
        if m.nrows() != other_dim * self.d_in {
            return Err(Error::DimensionMismatch {
                expected: other_dim * self.d_in,
                found: m.nrows(),
            });
        }
        let id = linalg::identity(other_dim);
        let mut out = CMatrix::zeros(other_dim * self.d_out, other_dim * self.d_out);
        for k in &self.kraus {
            let kk = linalg::kron(&id, k);
            out += &kk * m * kk.adjoint();
        }
        Ok(out)
    }
}
