//! Two-universal hashing over `GF(2^n)` and privacy-amplification checks.
//!
//! Bit strings of length `n` are identified with field elements through their
//! polynomial coefficients, bit 0 being the constant term. A hash function
//! with key `k != 0` maps `x` to the `s` most significant bits of `k * x`.
//! Multiplication by a nonzero key is a linear bijection, so every label has
//! exactly `2^(n-s)` preimages and two distinct inputs collide with
//! probability `(2^(n-s) - 1) / (2^n - 1) <= 2^-s` over the keys.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::info::{self, Ensemble};
use crate::linalg::{self, real};
use crate::quantum::DensityMatrix;
use crate::{random, CMatrix, Error, Result};

pub const MAX_HASH_BITS: usize = 16;
/// Families up to this input length are enumerated in full.
pub const FULL_FAMILY_MAX_BITS: usize = 8;
pub const SAMPLED_FAMILY_SIZE: usize = 4096;

/// Irreducible polynomial for each `n` (index `n`), lowest-weight choice with
/// the smallest integer encoding; bit `i` is the coefficient of `t^i`.
pub const IRREDUCIBLE_POLYS: [u32; MAX_HASH_BITS + 1] = [
    0x0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003, 0x1002b,
];

fn check_bits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_HASH_BITS {
        return Err(Error::InvalidHash(format!("input length {n} not in 1..={MAX_HASH_BITS}")));
    }
    Ok(())
}

/// Product in `GF(2^n)` modulo [`IRREDUCIBLE_POLYS`]`[n]`. Inputs must be below `2^n`.
pub fn gf_mul(a: u32, b: u32, n: usize) -> u32 {
    debug_assert!((1..=MAX_HASH_BITS).contains(&n));
    let poly = IRREDUCIBLE_POLYS[n];
    let top = 1u32 << n;
    let mut a = a;
    let mut b = b;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

/// Multiplicative inverse via `a^(2^n - 2)`.
pub fn gf_inv(a: u32, n: usize) -> Option<u32> {
    if a == 0 {
        return None;
    }
    let mut result = 1u32;
    let mut base = a;
    let mut e = (1u32 << n) - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = gf_mul(result, base, n);
        }
        base = gf_mul(base, base, n);
        e >>= 1;
    }
    Some(result)
}

/// `{0,1}^n -> {0,1}^s`, `x -> top_s(key * x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HashFunction {
    n: usize,
    s: usize,
    key: u32,
}

impl HashFunction {
    pub fn new(n: usize, s: usize, key: u32) -> Result<Self> {
        check_bits(n)?;
        if s > n {
            return Err(Error::InvalidHash(format!("output length {s} > input length {n}")));
        }
        if key == 0 || key >> n != 0 {
            return Err(Error::InvalidHash(format!("key {key:#x} not a nonzero element of GF(2^{n})")));
        }
        Ok(Self { n, s, key })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn key(&self) -> u32 {
        self.key
    }

    pub fn eval(&self, x: u32) -> Result<u32> {
        if x >> self.n != 0 {
            return Err(Error::OutOfRange(format!("input {x:#x} has more than {} bits", self.n)));
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    fn eval_unchecked(&self, x: u32) -> u32 {
        gf_mul(self.key, x, self.n) >> (self.n - self.s)
    }

    /// All `x` with `g(x) = y`, ascending.
    pub fn preimage(&self, y: u32) -> Result<Vec<u32>> {
        if y >> self.s != 0 {
            return Err(Error::OutOfRange(format!("label {y:#x} has more than {} bits", self.s)));
        }
        let inv = gf_inv(self.key, self.n).expect("key is nonzero");
        let free = self.n - self.s;
        let mut xs: Vec<u32> = (0..1u32 << free)
            .map(|low| gf_mul(inv, (y << free) | low, self.n))
            .collect();
        xs.sort_unstable();
        Ok(xs)
    }

    /// `preimage(y)` for every label `y`.
    pub fn preimages(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::with_capacity(1 << (self.n - self.s)); 1 << self.s];
        for x in 0..1u32 << self.n {
            out[self.eval_unchecked(x) as usize].push(x);
        }
        out
    }
}

impl fmt::Display for HashFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) key {:#x} -> {} bits", self.n, self.key, self.s)
    }
}

#[derive(Serialize, Deserialize)]
struct HashRepr {
    n: usize,
    s: usize,
    key: String,
}

impl Serialize for HashFunction {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        HashRepr {
            n: self.n,
            s: self.s,
            key: format!("{:#x}", self.key),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HashFunction {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = HashRepr::deserialize(de)?;
        let digits = r.key.trim_start_matches("0x").trim_start_matches("0X");
        let key = u32::from_str_radix(digits, 16).map_err(serde::de::Error::custom)?;
        HashFunction::new(r.n, r.s, key).map_err(serde::de::Error::custom)
    }
}

/// A set of hash functions sharing `(n, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HashFamily {
    n: usize,
    s: usize,
    members: Vec<HashFunction>,
    exhaustive: bool,
}

impl HashFamily {
    /// Every nonzero key.
    pub fn full(n: usize, s: usize) -> Result<Self> {
        check_bits(n)?;
        let members = (1..1u32 << n)
            .map(|k| HashFunction::new(n, s, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            s,
            members,
            exhaustive: true,
        })
    }

    /// `size` keys drawn uniformly (with replacement) from the nonzero elements.
    pub fn sampled(n: usize, s: usize, size: usize, seed: u64) -> Result<Self> {
        check_bits(n)?;
        if size == 0 {
            return Err(Error::InvalidHash("empty family".into()));
        }
        let mut rng = random::rng_for(seed, "hash-family", ((n as u64) << 8) | s as u64);
        let members = (0..size)
            .map(|_| HashFunction::new(n, s, rng.random_range(1..1u32 << n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            s,
            members,
            exhaustive: false,
        })
    }

    /// Full family for `n <= 8`, otherwise a seeded sample of 4096 keys.
    pub fn standard(n: usize, s: usize, seed: u64) -> Result<Self> {
        if n <= FULL_FAMILY_MAX_BITS {
            Self::full(n, s)
        } else {
            Self::sampled(n, s, SAMPLED_FAMILY_SIZE, seed)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn members(&self) -> &[HashFunction] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }
}

/// Exact collision probability of the full family for any `x != x'`.
pub fn exact_collision_probability(n: usize, s: usize) -> f64 {
    ((1u64 << (n - s)) - 1) as f64 / ((1u64 << n) - 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalityCheck {
    /// Largest collision frequency over the tested pairs.
    pub max_collision: f64,
    /// Pooled collision frequency over the tested pairs.
    pub mean_collision: f64,
    /// `2^-s`, plus three standard errors for sampled checks.
    pub threshold: f64,
    pub pairs_tested: usize,
    pub pass: bool,
}

/// Collision frequency of `x != x'` depends only on `x ^ x'` for a linear
/// family; count, for one difference, the members mapping it to 0.
fn collisions_for_difference(members: &[HashFunction], delta: u32) -> usize {
    members.iter().filter(|g| g.eval_unchecked(delta) == 0).count()
}

/// Exhaustive two-universality check: every difference `x ^ x'`, i.e. every
/// unordered pair, against the bound `2^-s`.
pub fn check_two_universal_exhaustive(family: &HashFamily) -> UniversalityCheck {
    let m = family.len() as f64;
    let bound = 0.5f64.powi(family.s as i32);
    let counts: Vec<usize> = (1..1u32 << family.n)
        .into_par_iter()
        .map(|delta| collisions_for_difference(&family.members, delta))
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0) as f64 / m;
    let mean = counts.iter().sum::<usize>() as f64 / (m * counts.len() as f64);
    UniversalityCheck {
        max_collision: max,
        mean_collision: mean,
        threshold: bound,
        pairs_tested: counts.len() << (family.n - 1),
        pass: max <= bound + 1e-12,
    }
}

/// Statistical check on `pairs` random differences: the pooled collision
/// frequency must stay within three standard errors of `2^-s`.
pub fn check_two_universal_sampled(family: &HashFamily, pairs: usize, seed: u64) -> UniversalityCheck {
    let mut rng = random::rng_for(seed, "universality-pairs", family.n as u64);
    let deltas: Vec<u32> = (0..pairs.max(1)).map(|_| rng.random_range(1..1u32 << family.n)).collect();
    let counts: Vec<usize> = deltas
        .par_iter()
        .map(|&delta| collisions_for_difference(&family.members, delta))
        .collect();
    let m = family.len() as f64;
    let p = 0.5f64.powi(family.s as i32);
    let trials = m * counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / trials;
    let max = counts.iter().copied().max().unwrap_or(0) as f64 / m;
    let threshold = p + 3.0 * (p * (1.0 - p) / trials).sqrt();
    UniversalityCheck {
        max_collision: max,
        mean_collision: mean,
        threshold,
        pairs_tested: counts.len(),
        pass: mean <= threshold,
    }
}

/// Coarse-grain `E` through `g`: labels `y` with `q_y = sum_{g(x)=y} p_x` and
/// `sigma_y = sum_{g(x)=y} p_x rho_x / q_y` (the average state when `q_y = 0`).
pub fn hashed_ensemble(ens: &Ensemble, g: &HashFunction) -> Result<Ensemble> {
    if ens.len() != 1 << g.n() {
        return Err(Error::DimensionMismatch {
            expected: 1 << g.n(),
            found: ens.len(),
        });
    }
    let d = ens.dim();
    let dims = ens.average().register_dims().to_vec();
    let mut priors = Vec::with_capacity(1 << g.s());
    let mut states = Vec::with_capacity(1 << g.s());
    for pre in g.preimages() {
        let mut q = 0.0;
        let mut acc = CMatrix::zeros(d, d);
        for x in pre {
            let p = ens.priors()[x as usize];
            q += p;
            acc += ens.states()[x as usize].matrix() * real(p);
        }
        let sigma = if q > 0.0 {
            DensityMatrix::from_parts_unchecked(linalg::hermitize(&(acc / real(q))), dims.clone())
        } else {
            ens.average().clone()
        };
        priors.push(q);
        states.push(sigma);
    }
    info::renormalize(&mut priors);
    Ensemble::new(priors, states)
}

/// Family average of `d(E_g)` against `1/2 * 2^{-(H_2 - s)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub h2: f64,
    pub s: usize,
}

impl PaCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

/// `d(E_g)` for every member, in family order.
pub fn family_distances(ens: &Ensemble, family: &HashFamily) -> Result<Vec<f64>> {
    family
        .members()
        .par_iter()
        .map(|g| info::uniformity_distance_any(&hashed_ensemble(ens, g)?))
        .collect()
}

pub fn pa_average_distance(ens: &Ensemble, s: usize, family: &HashFamily) -> Result<PaCheck> {
    if family.s() != s {
        return Err(Error::InvalidHash(format!("family outputs {} bits, expected {s}", family.s())));
    }
    let h2 = info::collision_conditional_entropy(ens)?;
    let ds = family_distances(ens, family)?;
    let lhs = ds.iter().sum::<f64>() / ds.len() as f64;
    let rhs = 0.5 * 2f64.powf(-(h2 - s as f64) / 2.0);
    Ok(PaCheck { lhs, rhs, h2, s })
}

/// Member minimising `d(E_g)` (first one on ties).
pub fn best_hash(ens: &Ensemble, s: usize, family: &HashFamily) -> Result<(HashFunction, f64)> {
    if family.s() != s {
        return Err(Error::InvalidHash(format!("family outputs {} bits, expected {s}", family.s())));
    }
    let ds = family_distances(ens, family)?;
    let mut best = 0;
    for (i, d) in ds.iter().enumerate() {
        if *d < ds[best] {
            best = i;
        }
    }
    Ok((family.members()[best], ds[best]))
}
