//! Exact dense simulation of quantum bit-string commitment.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: states, channels, distance measures and unitaries on small
//!   multi-register Hilbert spaces.
//! - [`info`]: ensembles and the entropic figures of merit used to argue about
//!   concealment (collision entropy, square-root measurement, Holevo
//!   information, accessible-information estimation).
//! - [`hashing`]: a two-universal family over `GF(2^n)` and privacy
//!   amplification checks.
//! - [`protocols`]: the LOCKCOM family, Alice's hashing attack, Bob's cheat
//!   channels and locking experiments.
//!
//! All logarithms are base 2.

pub mod error;
pub mod hashing;
pub mod info;
pub mod linalg;
pub mod protocols;
pub mod quantum;
pub mod random;

pub use error::{Error, Result};

pub use hashing::{HashFamily, HashFunction};
pub use info::{Ensemble, GuessReport};
pub use protocols::{AliceAttackReport, CheatOutcome, CheatScenario, ProtocolInstance, Transcript};
pub use quantum::{DensityMatrix, QuantumChannel, StateVector, UnitarySet};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Largest dimension of any dense operator (density matrix, unitary, channel).
pub const MAX_OPERATOR_DIM: usize = 1 << 12;
/// Largest number of amplitudes in a pure state.
pub const MAX_STATE_DIM: usize = 1 << 20;
