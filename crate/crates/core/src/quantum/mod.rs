//! States, channels, distance measures and unitaries.
//!
//! Registers are addressed by index in the order fixed at construction; the
//! first register is the most significant digit of a composite index.

mod channel;
mod metrics;
mod state;
pub mod unitary;

pub use channel::QuantumChannel;
pub use metrics::{fidelity, trace_distance, trace_distance_matrices, uhlmann_unitary, Uhlmann};
pub use state::{tensor_densities, tensor_states, DensityMatrix, StateVector};
pub use unitary::{
    fourier, hadamard, hadamard_n, haar_unitary, haar_unitary_with_rng, standard_unitaries, UnitaryKind,
    UnitarySet,
};
