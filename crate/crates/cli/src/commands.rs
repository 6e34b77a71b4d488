use serde_json::json;

use qbsc_core::info::SeeSawConfig;
use qbsc_core::protocols::{
    self, alice_attack, lockcom_commit, lockcom_reveal, CheatKind, ProtocolInstance, Verdict, GAMMA_DEFAULT,
};
use qbsc_core::quantum::UnitaryKind;
use qbsc_core::random::{derive_seed, rng_for};

use crate::config::ExperimentConfig;
use crate::report::{num, CheckRecord, CsvTable, ReportEnvelope, Tally};
use crate::verify::{self, SuiteSize};
use crate::CliError;

pub const COMMANDS: [&str; 5] = ["run-protocol", "attack", "sweep-cheat", "locking", "verify-bounds"];

const DEFAULT_THETA_POINTS: usize = 16;
const DEFAULT_K_LIST: [usize; 5] = [1, 2, 4, 8, 16];
const SOUNDNESS_TOL: f64 = 1e-6;

/// A finished command: the envelope and, for sweeps, a CSV table.
#[derive(Debug, Clone)]
pub struct Output {
    pub envelope: ReportEnvelope,
    pub csv: Option<CsvTable>,
}

pub fn run(command: &str, cfg: &ExperimentConfig) -> Result<Output, CliError> {
    match command {
        "run-protocol" => cmd_run_protocol(cfg),
        "attack" => cmd_attack(cfg),
        "sweep-cheat" => cmd_sweep_cheat(cfg),
        "locking" => cmd_locking(cfg),
        "verify-bounds" => cmd_verify_bounds(cfg),
        other => Err(CliError::Usage(format!("unknown command {other:?}"))),
    }
}

fn plain(envelope: ReportEnvelope) -> Output {
    Output { envelope, csv: None }
}

fn unitary_kind(cfg: &ExperimentConfig) -> Result<UnitaryKind, CliError> {
    cfg.unitaries
        .as_deref()
        .unwrap_or("identity-hadamard")
        .parse()
        .map_err(|e| CliError::Usage(format!("unitaries: {e}")))
}

/// Qubit count for the qubit families, dimension for `fourier` and `haar(k)`.
fn instance(cfg: &ExperimentConfig) -> Result<ProtocolInstance, CliError> {
    let kind = unitary_kind(cfg)?;
    let n_or_d = match kind {
        UnitaryKind::Identity | UnitaryKind::IdentityHadamard => cfg.n.unwrap_or(3),
        UnitaryKind::FourierPair | UnitaryKind::Haar(_) => match (cfg.d, cfg.n) {
            (Some(d), _) => d,
            (None, Some(n)) => 1usize
                .checked_shl(n as u32)
                .ok_or_else(|| CliError::Usage(format!("n = {n} too large")))?,
            (None, None) => 8,
        },
    };
    Ok(ProtocolInstance::standard(kind, n_or_d, cfg.seed)?)
}

/// Honest commit and reveal for every `(x, r)`.
pub fn cmd_run_protocol(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let inst = instance(cfg)?;
    let mut accepts = 0usize;
    let mut trials = 0usize;
    let mut prob = Tally::new("accept-probability", 1e-12, false);
    for x in 0..inst.dim() {
        for r in 0..inst.num_bases() {
            let mut rng = rng_for(cfg.seed, "reveal", trials as u64);
            let mut t = lockcom_commit(&inst, x, r)?;
            if lockcom_reveal(&inst, &mut t, x, r, &mut rng)? == Verdict::Accept {
                accepts += 1;
            }
            prob.push(1.0 - t.accept_probability.unwrap_or(0.0), 0.0);
            trials += 1;
        }
    }
    let records = vec![
        CheckRecord::single("completeness", (trials - accepts) as f64, 0.0, 0.0),
        prob.finish(),
    ];
    let payload = json!({
        "protocol": inst.label(),
        "dim": inst.dim(),
        "bases": inst.num_bases(),
        "trials": trials,
        "accepts": accepts,
    });
    Ok(plain(ReportEnvelope::new("run-protocol", cfg, records, payload)))
}

pub fn cmd_attack(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let inst = instance(cfg)?;
    let n = inst.n_bits()?;
    let b = cfg.b_claimed.unwrap_or(n as f64 / 2.0);
    let gamma = cfg.gamma.unwrap_or(GAMMA_DEFAULT);
    let report = alice_attack(&inst, b, gamma, cfg.seed)?;
    let mut steps = Tally::new("uhlmann-step", SOUNDNESS_TOL, false);
    for s in &report.uhlmann_steps {
        steps.push(s.step_bound, s.success);
    }
    let records = vec![
        CheckRecord::single("attack-soundness", report.soundness_bound, report.total_success, SOUNDNESS_TOL),
        CheckRecord::single(
            "attack-empirical-soundness",
            report.empirical_lower_bound,
            report.total_success,
            SOUNDNESS_TOL,
        ),
        steps.finish(),
        CheckRecord::single("attack-label-sum", report.sum_eq_lhs, report.sum_eq_rhs, 1e-9),
    ];
    if report.bound_vacuous {
        log::info!("attack bound is vacuous at n = {n} (m = {}, eps = {})", report.m, report.epsilon);
    }
    let payload = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(plain(ReportEnvelope::new("attack", cfg, records, payload)))
}

fn theta_values(cfg: &ExperimentConfig) -> Result<Vec<f64>, CliError> {
    let grid = match &cfg.theta_grid {
        Some(g) => g.clone(),
        None => protocols::theta_grid(cfg.theta_points.unwrap_or(DEFAULT_THETA_POINTS)),
    };
    if grid.is_empty() {
        return Err(CliError::Usage("theta grid is empty".into()));
    }
    Ok(grid)
}

pub fn cmd_sweep_cheat(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let kinds: Vec<CheatKind> = match cfg.cheat_kind.as_deref() {
        None | Some("all") => CheatKind::ALL.to_vec(),
        Some(k) => vec![k.parse().map_err(|e| CliError::Usage(format!("cheat_kind: {e}")))?],
    };
    let d = cfg.d.unwrap_or(2);
    let grid = theta_values(cfg)?;
    let mut csv = CsvTable::new(&["kind", "theta", "epsilon", "chi_c", "bound", "slack"]);
    let mut bound = Tally::new(verify::CHEAT_SENSITIVITY, verify::CHEAT_TOL, false);
    let mut returned = Tally::new(verify::RETURNED_INFORMATION, verify::CHEAT_TOL, false);
    let mut honest = Tally::new("honest-endpoint", 0.0, false);
    let mut points = Vec::new();
    for kind in kinds {
        for (theta, out) in protocols::cheat_sweep(kind, d, &grid)? {
            bound.push(out.chi_c, out.bound);
            if let Some(c) = out.chain.iter().find(|c| c.name == "returned-information") {
                returned.push(c.lhs, c.rhs);
            }
            if theta == 0.0 {
                honest.push(out.epsilon.max(out.chi_c), 1e-6);
            }
            csv.push(vec![
                kind.to_string(),
                num(theta),
                num(out.epsilon),
                num(out.chi_c),
                num(out.bound),
                num(out.slack),
            ]);
            points.push(json!({ "kind": kind, "theta": theta, "outcome": out }));
        }
    }
    let mut records = vec![bound.finish(), returned.finish()];
    let honest = honest.finish();
    if honest.cases > 0 {
        records.push(honest);
    }
    let env = ReportEnvelope::new("sweep-cheat", cfg, records, json!({ "d": d, "points": points }));
    Ok(Output {
        envelope: env,
        csv: Some(csv),
    })
}

pub fn cmd_locking(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n = cfg.n.unwrap_or(2);
    let ks: Vec<usize> = match (cfg.k_bases, &cfg.k_list) {
        (Some(k), _) => vec![k],
        (None, Some(list)) => list.clone(),
        (None, None) => DEFAULT_K_LIST.to_vec(),
    };
    if ks.is_empty() {
        return Err(CliError::Usage("empty k list".into()));
    }
    let seeds = cfg.seeds.unwrap_or(1).max(1);
    let base = SeeSawConfig::default();
    let see_saw = SeeSawConfig {
        restarts: cfg.restarts.unwrap_or(base.restarts),
        iters: cfg.iters.unwrap_or(base.iters),
        ..base
    };
    let mut csv = CsvTable::new(&["k", "seed_index", "chi", "iacc_lower_bound", "binding_a"]);
    let mut cap = Tally::new("holevo-cap", qbsc_core::info::HOLEVO_GATE, false);
    let mut single = Tally::new("single-basis-accessible", 1e-6, false);
    let mut runs = Vec::new();
    let mut means = Vec::new();
    for &k in &ks {
        let mut chi_sum = 0.0;
        for i in 0..seeds {
            let seed = derive_seed(cfg.seed, "locking", (k * 1_000_000 + i) as u64);
            let r = protocols::locking_experiment(n, k, seed, &see_saw)?;
            cap.push(r.iacc_lower_bound, r.chi);
            if k == 1 {
                single.push((r.iacc_lower_bound - n as f64).abs(), 0.0);
            }
            chi_sum += r.chi;
            csv.push(vec![k.to_string(), i.to_string(), num(r.chi), num(r.iacc_lower_bound), num(r.binding_a)]);
            runs.push(r);
        }
        means.push(json!({ "k": k, "mean_chi": chi_sum / seeds as f64 }));
    }
    let mut records = vec![cap.finish()];
    let single = single.finish();
    if single.cases > 0 {
        records.push(single);
    }
    let payload = json!({ "n": n, "seeds": seeds, "mean_chi": means, "runs": runs });
    Ok(Output {
        envelope: ReportEnvelope::new("locking", cfg, records, payload),
        csv: Some(csv),
    })
}

pub fn cmd_verify_bounds(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let size = match cfg.cases {
        Some(c) => SuiteSize::uniform(c),
        None => SuiteSize::default(),
    };
    let size = SuiteSize {
        theta_points: cfg.theta_points.unwrap_or(size.theta_points),
        ..size
    };
    if let Some(name) = cfg.inject_fault.as_deref() {
        if !verify::ALL_RECORDS.contains(&name) {
            return Err(CliError::Usage(format!("inject_fault: unknown record {name:?}")));
        }
        log::info!("fault injected into {name}");
    }
    let records = verify::run_suite(cfg.seed, &size, cfg.inject_fault.as_deref())?;
    let payload = serde_json::to_value(&size).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(plain(ReportEnvelope::new("verify-bounds", cfg, records, json!({ "sizes": payload }))))
}
