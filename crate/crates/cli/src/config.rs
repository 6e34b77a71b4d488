use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// One experiment, read from a JSON file and/or command-line flags.
///
/// Unset fields fall back to per-command defaults; flags override the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k_bases: Option<usize>,
    /// Sweep for `locking`, used when `k_bases` is unset.
    pub k_list: Option<Vec<usize>>,
    /// Unitary set: `identity`, `identity-hadamard`, `fourier`, `haar(k)`.
    pub unitaries: Option<String>,
    pub b_claimed: Option<f64>,
    pub gamma: Option<f64>,
    /// Cheat family for `sweep-cheat`; all three when unset.
    pub cheat_kind: Option<String>,
    /// Explicit angles; takes precedence over `theta_points`.
    pub theta_grid: Option<Vec<f64>>,
    pub theta_points: Option<usize>,
    pub restarts: Option<usize>,
    pub iters: Option<usize>,
    /// Number of seeds for `locking`.
    pub seeds: Option<usize>,
    /// Random cases per record in `verify-bounds`.
    pub cases: Option<usize>,
    pub seed: u64,
    /// Not echoed in reports, so reruns to different paths stay byte-identical.
    #[serde(skip_serializing)]
    pub output_path: Option<PathBuf>,
    /// Results do not depend on the thread count.
    #[serde(skip_serializing)]
    pub jobs: Option<usize>,
    pub timing: bool,
    /// Test hook: name of a `verify-bounds` record whose right-hand side is negated.
    pub inject_fault: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Every field set in `other` replaces the one here.
    pub fn merge(&mut self, other: ExperimentConfig) {
        fn take<T>(dst: &mut Option<T>, src: Option<T>) {
            if src.is_some() {
                *dst = src;
            }
        }
        take(&mut self.command, other.command);
        take(&mut self.n, other.n);
        take(&mut self.d, other.d);
        take(&mut self.k_bases, other.k_bases);
        take(&mut self.k_list, other.k_list);
        take(&mut self.unitaries, other.unitaries);
        take(&mut self.b_claimed, other.b_claimed);
        take(&mut self.gamma, other.gamma);
        take(&mut self.cheat_kind, other.cheat_kind);
        take(&mut self.theta_grid, other.theta_grid);
        take(&mut self.theta_points, other.theta_points);
        take(&mut self.restarts, other.restarts);
        take(&mut self.iters, other.iters);
        take(&mut self.seeds, other.seeds);
        take(&mut self.cases, other.cases);
        take(&mut self.output_path, other.output_path);
        take(&mut self.jobs, other.jobs);
        take(&mut self.inject_fault, other.inject_fault);
        self.timing |= other.timing;
    }
}
