use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::info::{entropy, Ensemble};
use crate::linalg::{self, real};
use crate::{random, CMatrix, CVector, Error, Result};

/// Slack allowed above the Holevo quantity before the estimate is rejected.
pub const HOLEVO_GATE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    /// Random starting points (warm starts are added on top).
    pub restarts: usize,
    pub iters: usize,
    /// Stop once an accepted step improves I(X;Y) by less than this.
    pub tol: f64,
    /// Number of rank-one outcomes; `None` means `d^2`.
    pub outcomes: Option<usize>,
    pub seed: u64,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            iters: 500,
            tol: 1e-9,
            outcomes: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AccessibleInfo {
    /// `I(X;Y)` achieved by `povm`, a lower bound on the accessible information.
    pub lower_bound: f64,
    /// Holevo quantity, an upper bound.
    pub holevo: f64,
    /// Rank-one elements `|w_k><w_k|`.
    pub povm: Vec<CMatrix>,
    /// Index of the winning start (warm starts first).
    pub start: usize,
    pub iterations: usize,
}

/// `I(X;Y)` for outcome statistics `p(y|x) = Tr(M_y rho_x)`.
pub fn mutual_information(ens: &Ensemble, povm: &[CMatrix]) -> Result<f64> {
    let d = ens.dim();
    let mut t = vec![vec![0.0; ens.len()]; povm.len()];
    for (k, m) in povm.iter().enumerate() {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.nrows(),
            });
        }
        for (x, rho) in ens.states().iter().enumerate() {
            t[k][x] = (m * rho.matrix()).trace().re.max(0.0);
        }
    }
    Ok(mi_from_table(ens.priors(), &t))
}

fn mi_from_table(priors: &[f64], t: &[Vec<f64>]) -> f64 {
    let mut mi = 0.0;
    for row in t {
        let q: f64 = row.iter().zip(priors).map(|(t, p)| t * p).sum();
        if q <= 0.0 {
            continue;
        }
        for (tx, p) in row.iter().zip(priors) {
            if *tx > 0.0 && *p > 0.0 {
                mi += p * tx * (tx / q).log2();
            }
        }
    }
    mi
}

struct Problem<'a> {
    priors: &'a [f64],
    states: Vec<&'a CMatrix>,
    d: usize,
}

impl Problem<'_> {
    fn table(&self, w: &[CVector]) -> Vec<Vec<f64>> {
        w.iter()
            .map(|v| {
                self.states
                    .iter()
                    .map(|rho| v.dotc(&(*rho * v)).re.max(0.0))
                    .collect()
            })
            .collect()
    }

    fn mi(&self, w: &[CVector]) -> f64 {
        mi_from_table(self.priors, &self.table(w))
    }

    /// `R_k = sum_x p_x rho_x log2(t_kx / q_k)`, the derivative of I(X;Y)
    /// with respect to `M_k`.
    fn gradient(&self, w: &[CVector]) -> Vec<CMatrix> {
        let t = self.table(w);
        t.iter()
            .map(|row| {
                let q: f64 = row.iter().zip(self.priors).map(|(t, p)| t * p).sum();
                let mut r = CMatrix::zeros(self.d, self.d);
                if q <= 0.0 {
                    return r;
                }
                for ((tx, p), rho) in row.iter().zip(self.priors).zip(&self.states) {
                    if *p > 0.0 {
                        let ratio = (tx / q).max(1e-30);
                        r += *rho * real(p * ratio.log2());
                    }
                }
                r
            })
            .collect()
    }
}

/// Map vectors to a valid rank-one POVM: `w_k -> G^{-1/2} w_k` with
/// `G = sum_k w_k w_k^dagger`.
fn complete(w: &[CVector], d: usize) -> Option<Vec<CVector>> {
    let mut g = CMatrix::zeros(d, d);
    for v in w {
        g += v * v.adjoint();
    }
    let e = linalg::eigh(&g).ok()?;
    if e.values.last().copied().unwrap_or(0.0) < 1e-12 {
        return None;
    }
    let s = linalg::spectral_recompose(&e, |l| 1.0 / l.sqrt());
    Some(w.iter().map(|v| &s * v).collect())
}

struct Run {
    mi: f64,
    w: Vec<CVector>,
    iterations: usize,
}

fn ascend(p: &Problem<'_>, start: Vec<CVector>, cfg: &SeeSawConfig) -> Option<Run> {
    let mut w = complete(&start, p.d)?;
    let mut mi = p.mi(&w);
    let mut step = 0.5;
    let mut iterations = 0;
    for _ in 0..cfg.iters {
        iterations += 1;
        let grad = p.gradient(&w);
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<CVector> = w
                .iter()
                .zip(&grad)
                .map(|(v, r)| v + (r * v) * real(step))
                .collect();
            if let Some(nw) = complete(&trial, p.d) {
                let nmi = p.mi(&nw);
                if nmi > mi {
                    accepted = Some((nw, nmi));
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
        match accepted {
            Some((nw, nmi)) => {
                let gain = nmi - mi;
                w = nw;
                mi = nmi;
                step = (step * 1.5).min(64.0);
                if gain < cfg.tol {
                    break;
                }
            }
            None => break,
        }
    }
    Some(Run { mi, w, iterations })
}

/// Deterministic starting points: the computational basis, the eigenbasis of
/// each member (at most `d` of them), the eigenbasis of the weighted mixture
/// `sum_x (x + 1) p_x rho_x` (which separates mutually orthogonal members),
/// and the rank-one split of the square-root measurement.
fn warm_starts(ens: &Ensemble) -> Result<Vec<Vec<CVector>>> {
    let d = ens.dim();
    let mut starts = vec![(0..d).map(|i| linalg::basis_vector(d, i)).collect::<Vec<_>>()];
    for rho in ens.states().iter().take(d) {
        let e = linalg::eigh(rho.matrix())?;
        starts.push((0..d).map(|i| e.vectors.column(i).into_owned()).collect());
    }
    let mut mix = CMatrix::zeros(d, d);
    for (x, (p, rho)) in ens.priors().iter().zip(ens.states()).enumerate() {
        mix += rho.matrix() * real((x + 1) as f64 * p);
    }
    let e = linalg::eigh(&mix)?;
    starts.push((0..d).map(|i| e.vectors.column(i).into_owned()).collect());
    let srm = crate::info::srm_guess(ens)?;
    let mut split = Vec::new();
    for m in srm.povm.iter().chain(std::iter::once(&srm.reject)) {
        let e = linalg::eigh(m)?;
        for (i, &l) in e.values.iter().enumerate() {
            if l > 1e-12 {
                split.push(e.vectors.column(i) * real(l.sqrt()));
            }
        }
    }
    if !split.is_empty() {
        starts.push(split);
    }
    Ok(starts)
}

/// See-saw lower bound on the accessible information.
///
/// Each start is a set of rank-one POVM vectors; each iteration moves along
/// `w_k -> (1 + s R_k) w_k`, renormalises to a POVM and backtracks on `s`
/// until I(X;Y) increases. The best start wins (ties go to the lower index).
pub fn accessible_info_estimate(ens: &Ensemble, cfg: &SeeSawConfig) -> Result<AccessibleInfo> {
    let d = ens.dim();
    let k = cfg.outcomes.unwrap_or(d * d).max(d);
    let holevo = entropy::holevo_chi(ens)?;
    let problem = Problem {
        priors: ens.priors(),
        states: ens.states().iter().map(|s| s.matrix()).collect(),
        d,
    };
    let mut starts = warm_starts(ens)?;
    let warm = starts.len();
    for i in 0..cfg.restarts {
        let mut rng = random::rng_for(cfg.seed, "see-saw", i as u64);
        let g = random::ginibre(d, k, &mut rng);
        starts.push((0..k).map(|c| g.column(c).into_owned()).collect());
    }
    let runs: Vec<Option<Run>> = starts.into_par_iter().map(|s| ascend(&problem, s, cfg)).collect();
    let mut best: Option<(usize, Run)> = None;
    for (i, run) in runs.into_iter().enumerate() {
        if let Some(run) = run {
            if best.as_ref().is_none_or(|(_, b)| run.mi > b.mi) {
                best = Some((i, run));
            }
        }
    }
    let (start, run) = best.ok_or_else(|| Error::Numerical("no valid see-saw start".into()))?;
    if run.mi > holevo + HOLEVO_GATE {
        return Err(Error::Numerical(format!(
            "accessible information estimate {} exceeds Holevo quantity {holevo}",
            run.mi
        )));
    }
    log::debug!("see-saw: best start {start} of {} ({} warm), I = {}", cfg.restarts + warm, warm, run.mi);
    Ok(AccessibleInfo {
        lower_bound: run.mi.max(0.0),
        holevo,
        povm: run.w.iter().map(linalg::outer).collect(),
        start,
        iterations: run.iterations,
    })
}
