//! Bob's cheating strategies against the cheat-sensitive two-basis protocol.
//!
//! Registers: Alice keeps `X` (dimension `d`) and `R` (basis bit), `R'` is
//! the copy of `R` sent at reveal time, `Y` carries the commitment. Bob's
//! cheat isometry splits `Y` into `C` (kept forever) and `Q`; after
//! receiving `R'` he maps `R' Q -> R' S T` and returns `S`, which Alice
//! measures in the computational basis.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::info::{self, Ensemble};
use crate::linalg::{self, c, real};
use crate::quantum::{self, DensityMatrix, QuantumChannel, StateVector};
use crate::{CMatrix, CVector, Error, Result};

const ISOMETRY_TOL: f64 = 1e-9;
/// Slack on the final cheat-sensitivity inequality.
pub const CHEAT_BOUND_TOL: f64 = 1e-7;
const CHAIN_TOL: f64 = 1e-9;

// register positions in the initial state
const X: usize = 0;
const R: usize = 1;
const RP: usize = 2;
const Y: usize = 3;

/// `(2d)^{-1/2} sum_{x,r} |x>^X |r>^R |r>^{R'} U^r |x>^Y`, registers `[d, 2, 2, d]`.
pub fn build_cs_state(d: usize, u: &CMatrix) -> Result<StateVector> {
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u.nrows(),
        });
    }
    let err = quantum::unitary::unitarity_error(u);
    if err > ISOMETRY_TOL {
        return Err(Error::NotUnitary(err));
    }
    let scale = (2.0 * d as f64).sqrt().recip();
    let dims = vec![d, 2, 2, d];
    let mut amps = CVector::zeros(4 * d * d);
    for x in 0..d {
        for r in 0..2 {
            for y in 0..d {
                let a = if r == 0 {
                    if x == y {
                        linalg::ONE
                    } else {
                        linalg::ZERO
                    }
                } else {
                    u[(y, x)]
                };
                amps[linalg::compose(&[x, r, r, y], &dims)] = a * scale;
            }
        }
    }
    StateVector::new(amps, dims)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheatKind {
    /// `|y> -> cos t |flag> |y> + sin t |y> |y>`: a computational-basis copy
    /// with amplitude `sin t`.
    PartialMeasure,
    /// `|y> -> |c_y(t)> |y>` with Fourier-phase markers that go from
    /// identical (`t = 0`) to orthogonal (`t = pi/2`).
    ControlledRotation,
    /// The partial copy of `PartialMeasure`, taken in the conjugate basis.
    CopyFraction,
}

impl CheatKind {
    pub const ALL: [CheatKind; 3] = [CheatKind::PartialMeasure, CheatKind::ControlledRotation, CheatKind::CopyFraction];
}

impl fmt::Display for CheatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheatKind::PartialMeasure => "partial-measure",
            CheatKind::ControlledRotation => "controlled-rotation",
            CheatKind::CopyFraction => "copy-fraction",
        })
    }
}

impl FromStr for CheatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "partial-measure" => Ok(CheatKind::PartialMeasure),
            "controlled-rotation" => Ok(CheatKind::ControlledRotation),
            "copy-fraction" => Ok(CheatKind::CopyFraction),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

/// Bob's strategy: `V_cheat: Y -> C Q` and `V_prepare: R' Q -> R' S T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheatScenario {
    pub d: usize,
    /// Second commitment basis (`U^1`).
    pub u: CMatrix,
    /// Rows ordered `(c, q)`.
    pub v_cheat: CMatrix,
    pub dim_c: usize,
    pub dim_q: usize,
    /// Columns `(r', q)`, rows `(r', s, t)`.
    pub v_prepare: CMatrix,
    pub dim_s: usize,
    pub dim_t: usize,
    pub label: String,
}

impl CheatScenario {
    pub fn new(
        u: CMatrix,
        v_cheat: CMatrix,
        (dim_c, dim_q): (usize, usize),
        v_prepare: CMatrix,
        (dim_s, dim_t): (usize, usize),
        label: impl Into<String>,
    ) -> Result<Self> {
        let d = u.nrows();
        let sc = Self {
            d,
            u,
            v_cheat,
            dim_c,
            dim_q,
            v_prepare,
            dim_s,
            dim_t,
            label: label.into(),
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        let mismatch = |expected, found| Err(Error::DimensionMismatch { expected, found });
        if self.u.ncols() != d {
            return mismatch(d, self.u.ncols());
        }
        if self.v_cheat.ncols() != d {
            return mismatch(d, self.v_cheat.ncols());
        }
        if self.v_cheat.nrows() != self.dim_c * self.dim_q {
            return mismatch(self.dim_c * self.dim_q, self.v_cheat.nrows());
        }
        if self.v_prepare.ncols() != 2 * self.dim_q {
            return mismatch(2 * self.dim_q, self.v_prepare.ncols());
        }
        if self.v_prepare.nrows() != 2 * self.dim_s * self.dim_t {
            return mismatch(2 * self.dim_s * self.dim_t, self.v_prepare.nrows());
        }
        if self.dim_s != d {
            return mismatch(d, self.dim_s);
        }
        let e = quantum::unitary::unitarity_error(&self.u);
        if e > ISOMETRY_TOL {
            return Err(Error::NotUnitary(e));
        }
        for v in [&self.v_cheat, &self.v_prepare] {
            let e = linalg::isometry_error(v);
            if e > ISOMETRY_TOL {
                return Err(Error::NotUnitary(e));
            }
        }
        Ok(())
    }

    /// `Lambda^C`: `V_cheat` followed by tracing out `Q`.
    pub fn channel_c(&self) -> Result<QuantumChannel> {
        QuantumChannel::from_isometry(self.v_cheat.clone(), self.dim_c, self.dim_q)
    }

    /// `Lambda^Q`: `V_cheat` followed by tracing out `C`.
    pub fn channel_q(&self) -> Result<QuantumChannel> {
        self.channel_c()?.complementary()
    }
}

/// Honest preparation `sum_{r'} |r'><r'| (x) (U^{r'})^dagger`, with `T` trivial.
pub fn honest_prepare(u: &CMatrix) -> CMatrix {
    let d = u.nrows();
    let mut v = CMatrix::zeros(2 * d, 2 * d);
    v.view_mut((0, 0), (d, d)).copy_from(&linalg::identity(d));
    v.view_mut((d, d), (d, d)).copy_from(&u.adjoint());
    v
}

/// `V = sum_y |c_y> (x) |y><y|` for unit markers `c_y` in `C`.
fn marker_isometry(markers: &[CVector]) -> CMatrix {
    let d = markers.len();
    let dc = markers[0].len();
    let mut v = CMatrix::zeros(dc * d, d);
    for (y, m) in markers.iter().enumerate() {
        for k in 0..dc {
            v[(k * d + y, y)] = m[k];
        }
    }
    v
}

/// Parameterised cheat from honest (`theta = 0`) to a full copy (`theta = pi/2`).
pub fn bob_cheat_family(kind: CheatKind, theta: f64, d: usize) -> Result<CheatScenario> {
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside [0, pi/2]")));
    }
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    let u = quantum::fourier(d)?;
    let (ct, st) = (theta.cos(), theta.sin());
    let flag_markers = || -> Vec<CVector> {
        (0..d)
            .map(|y| {
                let mut m = CVector::zeros(d + 1);
                m[d] = real(ct);
                m[y] += real(st);
                m
            })
            .collect()
    };
    let (v_cheat, dim_c) = match kind {
        CheatKind::PartialMeasure => (marker_isometry(&flag_markers()), d + 1),
        CheatKind::ControlledRotation => {
            let frac = theta / FRAC_PI_2;
            let scale = (d as f64).sqrt().recip();
            let markers: Vec<CVector> = (0..d)
                .map(|y| {
                    CVector::from_fn(d, |k, _| {
                        let ph = 2.0 * PI * (y * k) as f64 * frac / d as f64;
                        c(ph.cos() * scale, ph.sin() * scale)
                    })
                })
                .collect();
            (marker_isometry(&markers), d)
        }
        CheatKind::CopyFraction => {
            // (1 (x) U) V_flag U^dagger: copy the U-basis label instead
            let v = marker_isometry(&flag_markers());
            let lift = linalg::kron(&linalg::identity(d + 1), &u);
            (lift * v * u.adjoint(), d + 1)
        }
    };
    CheatScenario::new(
        u.clone(),
        v_cheat,
        (dim_c, d),
        honest_prepare(&u),
        (d, 1),
        format!("{kind}(theta={theta:.6}, d={d})"),
    )
}

/// One named inequality `lhs <= rhs` (equalities are recorded as `|a-b| <= tol`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl ChainCheck {
    fn le(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            pass: lhs <= rhs + tol,
        }
    }

    fn eq(name: &str, a: f64, b: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs: (a - b).abs(),
            rhs: tol,
            pass: (a - b).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheatOutcome {
    pub label: String,
    pub d: usize,
    /// Detection probability `1/d sum_x (1 - <x| rho^S_x |x>)`.
    pub epsilon: f64,
    /// `chi(E^C)`, Bob's Holevo gain.
    pub chi_c: f64,
    pub chi_s: f64,
    pub chi_c_r: [f64; 2],
    pub chi_q_r: [f64; 2],
    pub chi_s_r: [f64; 2],
    /// `I(XRR'; C)` from the global state.
    pub mi_c: f64,
    /// `I(tau; Lambda^C)` from the channel.
    pub mi_c_channel: f64,
    pub mi_q: f64,
    pub h_xrr: f64,
    /// `4 sqrt(eps) log2 d + 2 mu(2 sqrt(eps))`
    pub bound: f64,
    /// `bound - chi_c`
    pub slack: f64,
    pub pass: bool,
    pub chain: Vec<ChainCheck>,
}

/// Conditional ensembles `{p_x, rho^Z_x}` (when `r` is `None`) or
/// `{p_x, rho^Z_{xr}}`, obtained by projecting `X` (and `R`) onto basis
/// values and reducing to register `z`.
fn ensemble_on(state: &StateVector, z: usize, r: Option<usize>, d: usize) -> Result<Ensemble> {
    let mut priors = Vec::with_capacity(d);
    let mut states = Vec::with_capacity(d);
    for x in 0..d {
        let mut outcomes = vec![(X, x)];
        if let Some(r) = r {
            outcomes.push((R, r));
        }
        let (p, post) = state.condition(&outcomes)?;
        let post = post.ok_or_else(|| Error::Numerical(format!("string {x} has zero weight")))?;
        // registers of `post` are those of `state` minus the conditioned ones
        let shift = outcomes.iter().filter(|&&(reg, _)| reg < z).count();
        states.push(post.reduce(&[z - shift])?);
        priors.push(p);
    }
    info::renormalize(&mut priors);
    Ensemble::new(priors, states)
}

fn mixed_entropy(state: &StateVector, keep: &[usize]) -> Result<f64> {
    state.reduce(keep)?.entropy()
}

/// Exact evaluation of one scenario, including the intermediate steps of the
/// cheat-sensitivity argument.
pub fn run_cheat_scenario(sc: &CheatScenario) -> Result<CheatOutcome> {
    sc.validate()?;
    let d = sc.d;
    let psi = build_cs_state(d, &sc.u)?;
    // after V_cheat: [X, R, R', C, Q]
    let after_cheat = psi.apply(&sc.v_cheat, &[Y], &[sc.dim_c, sc.dim_q])?;
    const C: usize = 3;
    const Q: usize = 4;
    // after V_prepare on (R', Q): [X, R, C, R', S, T]
    let after_prep = after_cheat.apply(&sc.v_prepare, &[RP, Q], &[2, sc.dim_s, sc.dim_t])?;
    const S: usize = 4;

    let mut epsilon = 0.0;
    for x in 0..d {
        let (_, post) = after_prep.condition(&[(X, x)])?;
        let post = post.ok_or_else(|| Error::Numerical(format!("string {x} has zero weight")))?;
        // post registers: [R, C, R', S, T]
        let rho_s = post.reduce(&[S - 1])?;
        epsilon += 1.0 - rho_s.matrix()[(x, x)].re;
    }
    let epsilon = (epsilon / d as f64).clamp(0.0, 1.0);

    let e_c = ensemble_on(&after_cheat, C, None, d)?;
    let e_s = ensemble_on(&after_prep, S, None, d)?;
    let chi_c = info::holevo_chi(&e_c)?;
    let chi_s = info::holevo_chi(&e_s)?;
    let mut chi_c_r = [0.0; 2];
    let mut chi_q_r = [0.0; 2];
    let mut chi_s_r = [0.0; 2];
    for r in 0..2 {
        chi_c_r[r] = info::holevo_chi(&ensemble_on(&after_cheat, C, Some(r), d)?)?;
        chi_q_r[r] = info::holevo_chi(&ensemble_on(&after_cheat, Q, Some(r), d)?)?;
        chi_s_r[r] = info::holevo_chi(&ensemble_on(&after_prep, S, Some(r), d)?)?;
    }

    let h_xrr = mixed_entropy(&after_cheat, &[X, R, RP])?;
    let h_c = mixed_entropy(&after_cheat, &[C])?;
    let h_q = mixed_entropy(&after_cheat, &[Q])?;
    let h_xrrc = mixed_entropy(&after_cheat, &[X, R, RP, C])?;
    let h_xrrq = mixed_entropy(&after_cheat, &[X, R, RP, Q])?;
    let mi_c = h_xrr + h_c - h_xrrc;
    let mi_q = h_xrr + h_q - h_xrrq;
    let lambda_c = sc.channel_c()?;
    let lambda_q = sc.channel_q()?;
    let mi_c_channel = info::channel_mutual_info(&lambda_c)?;
    let mi_q_channel = info::channel_mutual_info(&lambda_q)?;

    // chi(Lambda^C(E_r)) from the channel, E_r = {1/d, U^r |x><x| U^r^dagger}
    let basis = Ensemble::uniform((0..d).map(|x| DensityMatrix::basis(d, x)).collect::<Result<Vec<_>>>()?)?;
    let rotated = basis.conjugate_by(&sc.u)?;
    let chi_lc = [
        info::holevo_chi(&basis.map_channel(&lambda_c)?)?,
        info::holevo_chi(&rotated.map_channel(&lambda_c)?)?,
    ];

    let log_d = (d as f64).log2();
    let r_eps = epsilon.sqrt();
    let mu = info::mu(2.0 * r_eps)?;
    let bound = info::fannes_ensemble_bound(epsilon, d)?;
    let pass = chi_c <= bound + CHEAT_BOUND_TOL;

    let chain = vec![
        ChainCheck::eq("channel-view-c", chi_c_r[0] + chi_c_r[1], chi_lc[0] + chi_lc[1], 1e-8),
        ChainCheck::eq("reference-c", mi_c, mi_c_channel, 1e-8),
        ChainCheck::eq("reference-q", mi_q, mi_q_channel, 1e-8),
        ChainCheck::le("uncertainty-c", chi_c_r[0] + chi_c_r[1], mi_c, 1e-7),
        ChainCheck::eq("purity", mi_c, 2.0 * h_xrr - mi_q, 1e-8),
        ChainCheck::le("uncertainty-q", chi_q_r[0] + chi_q_r[1], mi_q, 1e-7),
        ChainCheck::eq("reference-entropy", h_xrr, log_d, 1e-8),
        ChainCheck::le("data-processing-0", chi_s_r[0], chi_q_r[0], CHAIN_TOL),
        ChainCheck::le("data-processing-1", chi_s_r[1], chi_q_r[1], CHAIN_TOL),
        ChainCheck::le("concavity-c", chi_c, 0.5 * (chi_c_r[0] + chi_c_r[1]), CHAIN_TOL),
        ChainCheck::le("concavity-s", chi_s, 0.5 * (chi_s_r[0] + chi_s_r[1]), CHAIN_TOL),
        ChainCheck::le("returned-information", (1.0 - 4.0 * r_eps) * log_d - 2.0 * mu, chi_s, 1e-7),
        ChainCheck::le("cheat-sensitivity", chi_c, bound, CHEAT_BOUND_TOL),
    ];

    Ok(CheatOutcome {
        label: sc.label.clone(),
        d,
        epsilon,
        chi_c,
        chi_s,
        chi_c_r,
        chi_q_r,
        chi_s_r,
        mi_c,
        mi_c_channel,
        mi_q,
        h_xrr,
        bound,
        slack: bound - chi_c,
        pass,
        chain,
    })
}

/// One family swept over a grid of angles, in grid order.
pub fn cheat_sweep(kind: CheatKind, d: usize, thetas: &[f64]) -> Result<Vec<(f64, CheatOutcome)>> {
    if thetas.is_empty() {
        return Err(Error::OutOfRange("empty theta grid".into()));
    }
    thetas
        .par_iter()
        .map(|&t| Ok((t, run_cheat_scenario(&bob_cheat_family(kind, t, d)?)?)))
        .collect()
}

/// `points` evenly spaced angles covering `[0, pi/2]`.
pub fn theta_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| FRAC_PI_2 * i as f64 / (points - 1) as f64).collect(),
    }
}

/// Reduced state of Alice's check register for inspection.
pub fn returned_state(sc: &CheatScenario, x: usize) -> Result<DensityMatrix> {
    let psi = build_cs_state(sc.d, &sc.u)?;
    let a = psi.apply(&sc.v_cheat, &[Y], &[sc.dim_c, sc.dim_q])?;
    let b = a.apply(&sc.v_prepare, &[RP, 4], &[2, sc.dim_s, sc.dim_t])?;
    let (_, post) = b.condition(&[(X, x)])?;
    post.ok_or_else(|| Error::Numerical("zero weight".into()))?.reduce(&[3])
}
