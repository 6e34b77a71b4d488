use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, c, real};
use crate::{random, CMatrix, Error, Result, MAX_OPERATOR_DIM};

const UNITARY_TOL: f64 = 1e-9;

/// Ordered set of unitaries of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarySet {
    unitaries: Vec<CMatrix>,
    label: String,
}

impl UnitarySet {
    pub fn new(unitaries: Vec<CMatrix>, label: impl Into<String>) -> Result<Self> {
        let d = match unitaries.first() {
            Some(u) => u.nrows(),
            None => return Err(Error::InvalidState("empty unitary set".into())),
        };
        for u in &unitaries {
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: u.ncols(),
                });
            }
            let err = unitarity_error(u);
            if err > UNITARY_TOL {
                return Err(Error::NotUnitary(err));
            }
        }
        Ok(Self {
            unitaries,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn get(&self, r: usize) -> Option<&CMatrix> {
        self.unitaries.get(r)
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// `max |U^dagger U - 1|` entrywise.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    linalg::isometry_error(u)
}

pub fn hadamard() -> CMatrix {
    linalg::real_matrix(2, 2, &[1.0, 1.0, 1.0, -1.0]) * real(FRAC_1_SQRT_2)
}

/// `H^{\otimes n}`; entry `(j, k)` is `(-1)^{popcount(j & k)} / sqrt(2^n)`.
pub fn hadamard_n(n: usize) -> Result<CMatrix> {
    let d = 1usize << n;
    if d > MAX_OPERATOR_DIM {
        return Err(Error::TooLarge(d, MAX_OPERATOR_DIM));
    }
    let scale = (d as f64).sqrt().recip();
    Ok(CMatrix::from_fn(d, d, |j, k| {
        if (j & k).count_ones() % 2 == 0 {
            real(scale)
        } else {
            real(-scale)
        }
    }))
}

/// Discrete Fourier matrix `F[j,k] = exp(2 pi i jk/d) / sqrt(d)`.
pub fn fourier(d: usize) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be positive".into()));
    }
    if d > MAX_OPERATOR_DIM {
        return Err(Error::TooLarge(d, MAX_OPERATOR_DIM));
    }
    let scale = (d as f64).sqrt().recip();
    Ok(CMatrix::from_fn(d, d, |j, k| {
        // reduce jk mod d first so large products keep full phase accuracy
        let ph = 2.0 * PI * ((j * k) % d) as f64 / d as f64;
        c(ph.cos() * scale, ph.sin() * scale)
    }))
}

/// Cyclic shift `X|j> = |j+1 mod d>`.
pub fn shift(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, col| if r == (col + 1) % d { real(1.0) } else { real(0.0) })
}

/// Clock `Z|j> = omega^j |j>`.
pub fn clock(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, col| {
        if r == col {
            let ph = 2.0 * PI * r as f64 / d as f64;
            c(ph.cos(), ph.sin())
        } else {
            real(0.0)
        }
    })
}

/// Haar-distributed unitary, deterministic in `seed`.
pub fn haar_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with_rng(d, &mut rng)
}

/// QR of a complex Ginibre matrix with the phases of `diag(R)` moved into `Q`.
pub fn haar_unitary_with_rng<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be positive".into()));
    }
    if d > MAX_OPERATOR_DIM {
        return Err(Error::TooLarge(d, MAX_OPERATOR_DIM));
    }
    let g = random::ginibre(d, d, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for col in 0..d {
        let rii = r[(col, col)];
        let n = rii.norm();
        let phase = if n > 0.0 { rii / n } else { real(1.0) };
        for row in 0..d {
            q[(row, col)] *= phase;
        }
    }
    Ok(q)
}

/// Named unitary-set constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryKind {
    /// `{1}` alone.
    Identity,
    /// `{1^{(x)n}, H^{(x)n}}`, parameterised by `n`.
    IdentityHadamard,
    /// `{1, F_d}`, parameterised by `d`.
    FourierPair,
    /// `k` seeded Haar unitaries of dimension `d`.
    Haar(usize),
}

impl fmt::Display for UnitaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitaryKind::Identity => write!(f, "identity"),
            UnitaryKind::IdentityHadamard => write!(f, "identity-hadamard"),
            UnitaryKind::FourierPair => write!(f, "fourier-pair"),
            UnitaryKind::Haar(k) => write!(f, "haar({k})"),
        }
    }
}

impl FromStr for UnitaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "identity" => return Ok(UnitaryKind::Identity),
            "identity-hadamard" => return Ok(UnitaryKind::IdentityHadamard),
            "fourier-pair" | "fourier" => return Ok(UnitaryKind::FourierPair),
            _ => {}
        }
        let k = t
            .strip_prefix("haar(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("haar:"))
            .and_then(|k| k.parse::<usize>().ok());
        match k {
            Some(k) if k > 0 => Ok(UnitaryKind::Haar(k)),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

/// Build a standard unitary set.
///
/// `n_or_d` is the number of qubits for `identity`/`identity-hadamard` and the
/// dimension for `fourier-pair`/`haar(k)`. `seed` only affects `haar(k)`.
pub fn standard_unitaries(kind: UnitaryKind, n_or_d: usize, seed: u64) -> Result<UnitarySet> {
    match kind {
        UnitaryKind::Identity => {
            let d = qubit_dim(n_or_d)?;
            UnitarySet::new(vec![linalg::identity(d)], "identity")
        }
        UnitaryKind::IdentityHadamard => {
            let d = qubit_dim(n_or_d)?;
            UnitarySet::new(vec![linalg::identity(d), hadamard_n(n_or_d)?], "identity-hadamard")
        }
        UnitaryKind::FourierPair => {
            let d = n_or_d;
            UnitarySet::new(vec![linalg::identity(d.max(1)), fourier(d)?], "fourier")
        }
        UnitaryKind::Haar(k) => {
            let us = (0..k)
                .map(|i| haar_unitary(n_or_d, random::derive_seed(seed, "haar-unitary", i as u64)))
                .collect::<Result<Vec<_>>>()?;
            UnitarySet::new(us, "haar-random")
        }
    }
}

fn qubit_dim(n: usize) -> Result<usize> {
    if n >= usize::BITS as usize || (1usize << n) > MAX_OPERATOR_DIM {
        return Err(Error::TooLarge(1usize.checked_shl(n as u32).unwrap_or(usize::MAX), MAX_OPERATOR_DIM));
    }
    Ok(1 << n)
}
