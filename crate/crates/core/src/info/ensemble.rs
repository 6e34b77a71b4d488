use crate::linalg::{self, real};
use crate::quantum::{DensityMatrix, QuantumChannel, StateVector};
use crate::{CMatrix, Error, Result, MAX_OPERATOR_DIM};

const PRIOR_TOL: f64 = 1e-10;
const AVERAGE_TRACE_TOL: f64 = 1e-9;

/// Classical-quantum ensemble `{p_x, rho_x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
    average: DensityMatrix,
}

impl Ensemble {
    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::InvalidState("empty ensemble".into()));
        }
        if priors.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: priors.len(),
                found: states.len(),
            });
        }
        if let Some(p) = priors.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidState(format!("invalid prior {p}")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOL {
            return Err(Error::InvalidState(format!("priors sum to {total}")));
        }
        let d = states[0].dim();
        let mut avg = CMatrix::zeros(d, d);
        for (p, s) in priors.iter().zip(&states) {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                });
            }
            if *p > 0.0 {
                avg += s.matrix() * real(*p);
            }
        }
        let tr = avg.trace().re;
        if (tr - 1.0).abs() > AVERAGE_TRACE_TOL {
            return Err(Error::InvalidState(format!("average state has trace {tr}")));
        }
        let average = DensityMatrix::from_parts_unchecked(linalg::hermitize(&avg), states[0].register_dims().to_vec());
        Ok(Self {
            priors,
            states,
            average,
        })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len().max(1);
        Self::new(vec![1.0 / n as f64; states.len()], states)
    }

    pub fn from_pure(priors: Vec<f64>, states: &[StateVector]) -> Result<Self> {
        Self::new(priors, states.iter().map(StateVector::density).collect())
    }

    /// `{2^-n, |x><x|}`
    pub fn orthogonal(n: usize) -> Result<Self> {
        let d = 1usize << n;
        let states = (0..d).map(|x| DensityMatrix::basis(d, x)).collect::<Result<Vec<_>>>()?;
        Self::uniform(states)
    }

    /// `2^n` copies of the same state with uniform priors.
    pub fn identical(n: usize, rho: &DensityMatrix) -> Result<Self> {
        Self::uniform(vec![rho.clone(); 1usize << n])
    }

    pub fn len(&self) -> usize {
        self.priors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.average.dim()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn average(&self) -> &DensityMatrix {
        &self.average
    }

    /// `n` such that the ensemble has `2^n` members.
    pub fn n_bits(&self) -> Result<usize> {
        let n = self.len();
        if n.is_power_of_two() {
            Ok(n.trailing_zeros() as usize)
        } else {
            Err(Error::NotPowerOfTwo(n))
        }
    }

    /// `rho_AB = sum_x p_x |x><x| (x) rho_x` on registers `[N] ++ dims`.
    ///
    /// Everything downstream works block by block; this is for inspection
    /// and small cross-checks.
    pub fn joint(&self) -> Result<DensityMatrix> {
        let n = self.len();
        let d = self.dim();
        if n * d > MAX_OPERATOR_DIM {
            return Err(Error::TooLarge(n * d, MAX_OPERATOR_DIM));
        }
        let mut m = CMatrix::zeros(n * d, n * d);
        for (x, (p, s)) in self.priors.iter().zip(&self.states).enumerate() {
            m.view_mut((x * d, x * d), (d, d)).copy_from(&(s.matrix() * real(*p)));
        }
        let mut dims = vec![n];
        dims.extend_from_slice(self.average.register_dims());
        Ok(DensityMatrix::from_parts_unchecked(m, dims))
    }

    pub fn map_channel(&self, ch: &QuantumChannel) -> Result<Ensemble> {
        let states = self.states.iter().map(|s| ch.apply(s)).collect::<Result<Vec<_>>>()?;
        Ensemble::new(self.priors.clone(), states)
    }

    /// Product ensemble; label `x1 * len(other) + x2`.
    pub fn tensor(&self, other: &Ensemble) -> Result<Ensemble> {
        let mut priors = Vec::with_capacity(self.len() * other.len());
        let mut states = Vec::with_capacity(self.len() * other.len());
        for (p, s) in self.priors.iter().zip(&self.states) {
            for (q, t) in other.priors.iter().zip(&other.states) {
                priors.push(p * q);
                states.push(s.tensor(t)?);
            }
        }
        renormalize(&mut priors);
        Ensemble::new(priors, states)
    }

    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Ensemble> {
        let states = self.states.iter().map(|s| s.conjugate_by(u)).collect::<Result<Vec<_>>>()?;
        Ensemble::new(self.priors.clone(), states)
    }
}

/// Absorb rounding so products of priors still sum to one.
pub(crate) fn renormalize(p: &mut [f64]) {
    let s: f64 = p.iter().sum();
    if s > 0.0 {
        for x in p.iter_mut() {
            *x /= s;
        }
    }
}
