//! Ensembles and their information-theoretic figures of merit.

mod accessible;
mod ensemble;
mod entropy;
mod guessing;

pub use accessible::{accessible_info_estimate, mutual_information, AccessibleInfo, SeeSawConfig, HOLEVO_GATE};
pub use ensemble::Ensemble;
pub(crate) use ensemble::renormalize;
pub use entropy::{
    binary_entropy, channel_mutual_info, choi_state, fannes_ensemble_bound, holevo_chi, mu, shannon, von_neumann,
};
pub use guessing::{
    collision_conditional_entropy, collision_trace, ensemble_uniformity_distance, guess_with_povm, helstrom_guess,
    srm_guess, uniformity_distance_any, xi, GuessReport, GuessStrategy,
};
