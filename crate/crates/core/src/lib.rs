//! Adaptive quantum natural gradient descent for real-amplitude variational
//! circuits, simulated on a dense statevector.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`state`]: statevector, the RY / CNOT / H / Y / controlled-Y gate set,
//!   overlaps and Pauli-string expectation values.
//! - [`hamiltonian`]: Pauli-sum observables, exact or shot-sampled energies,
//!   dense matrices and exact spectra.
//! - [`ansatz`]: layered real-amplitude ansatze with the `R_Y(2a)` parameter
//!   convention.
//! - [`gradient`] and [`metric`]: parameter-shift gradients and the
//!   Fubini-Study metric (block-diagonal, ancilla-circuit, and a direct
//!   statevector-derivative reference).
//! - [`optimize`]: fixed-step QNGD, Armijo-adaptive QNGD and adaptive SGD.
//! - [`models`]: the H₂ and transverse-field Ising benchmarks.
//!
//! Qubit 0 is the most significant bit of a basis index, so `|10⟩` means
//! qubit 0 is set and has index 2.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod ansatz;
mod error;
pub mod gradient;
pub mod hamiltonian;
pub mod init;
pub mod ledger;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod optimize;
pub mod problem;
pub mod state;

pub use ansatz::{Ansatz, Entanglement, Layer};
pub use error::Error;
pub use hamiltonian::{Estimator, PauliHamiltonian};
pub use init::random_init;
pub use ledger::CircuitLedger;
pub use metric::{MetricMatrix, MetricMode};
pub use optimize::{
    run_optimizer, OptimizerConfig, OptimizerTrace, Scheme, StoppingRule, Termination,
};
pub use problem::Problem;
pub use state::{Gate, Pauli, PauliString, Statevector};

pub type Result<T, E = Error> = core::result::Result<T, E>;
