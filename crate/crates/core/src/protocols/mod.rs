//! LOCKCOM commitments and the attacks on them.

mod attack;
mod cheat;
mod lockcom;
mod locking;

pub use attack::{
    alice_attack, choose_m, scheme_ensemble, AliceAttackReport, ClassicalPrefix, CommitScheme, DistanceRoute,
    UhlmannStep, C_CONST, GAMMA_DEFAULT,
};
pub use cheat::{
    bob_cheat_family, build_cs_state, cheat_sweep, honest_prepare, returned_state, run_cheat_scenario, theta_grid,
    ChainCheck, CheatKind, CheatOutcome, CheatScenario, CHEAT_BOUND_TOL,
};
pub use lockcom::{
    accept_probability, binding_audit, honest_ensemble, lockcom_commit, lockcom_reveal, BindingAudit,
    ProtocolInstance, RevealStrategy, Transcript, Verdict,
};
pub use locking::{locking_experiment, locking_report, LockingReport, LOCKING_MAX_BASES, LOCKING_MAX_BITS};
