//! Benchmark models: the two-qubit H₂ Hamiltonian and the periodic
//! transverse-field Ising chain, with their ansatze.

use alloc::vec::Vec;

use crate::ansatz::{Ansatz, Entanglement};
use crate::hamiltonian::PauliHamiltonian;
use crate::state::{Pauli, PauliString};
use crate::{Error, Result};

/// Ising chains between these sizes are accepted.
pub const TFI_SITES: core::ops::RangeInclusive<usize> = 2..=12;

/// `H = 0.4 (ZI + IZ) + 0.2 XX`, spectrum `{±√17/5, ±1/5}`.
pub fn h2_hamiltonian() -> PauliHamiltonian {
    PauliHamiltonian::new(
        2,
        [
            (0.4, PauliString::new(alloc::vec![Pauli::Z, Pauli::I])),
            (0.4, PauliString::new(alloc::vec![Pauli::I, Pauli::Z])),
            (0.2, PauliString::new(alloc::vec![Pauli::X, Pauli::X])),
        ],
    )
    .expect("H2 terms are well formed")
}

/// Two rotation layers around one CNOT: four parameters.
pub fn h2_ansatz() -> Ansatz {
    Ansatz::real_amplitude(2, 2, Entanglement::Linear).expect("valid H2 ansatz")
}

pub fn h2_model() -> (PauliHamiltonian, Ansatz) {
    (h2_hamiltonian(), h2_ansatz())
}

/// `H = -(Σᵢ ZᵢZᵢ₊₁ + t Σᵢ Xᵢ)` on a ring of `n` sites. Both sums run over
/// all `n` sites with site `n+1` identified with site 1, so for `n = 2` the
/// bond appears twice and `Z₁Z₂` carries coefficient −2.
pub fn tfi_hamiltonian(n: usize, t: f64) -> Result<PauliHamiltonian> {
    if !TFI_SITES.contains(&n) {
        return Err(Error::InvalidModel("TFI chain length must be in 2..=12"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidModel("TFI field t must be positive"));
    }
    let mut terms: Vec<(f64, PauliString)> = (0..n)
        .map(|i| {
            (
                -1.0,
                PauliString::with_ops(n, &[(i, Pauli::Z), ((i + 1) % n, Pauli::Z)]),
            )
        })
        .collect();
    terms.extend((0..n).map(|i| (-t, PauliString::with_ops(n, &[(i, Pauli::X)]))));
    PauliHamiltonian::new(n, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TfiSetup {
    /// Two rotation layers around one full entangling layer.
    Minimal,
    /// `n` rotation layers with a full entangling layer between each pair.
    Overparam,
}

pub fn tfi_ansatz(n: usize, setup: TfiSetup) -> Result<Ansatz> {
    let layers = match setup {
        TfiSetup::Minimal => 2,
        TfiSetup::Overparam => n,
    };
    Ansatz::real_amplitude(n, layers, Entanglement::Full)
}

pub fn tfi_model(n: usize, t: f64, setup: TfiSetup) -> Result<(PauliHamiltonian, Ansatz)> {
    Ok((tfi_hamiltonian(n, t)?, tfi_ansatz(n, setup)?))
}

/// Ansatz used for Hamiltonians read from a term file: `layers` rotation
/// layers with full entanglement between them.
pub fn file_ansatz(h: &PauliHamiltonian, layers: usize) -> Result<Ansatz> {
    Ansatz::real_amplitude(h.n_qubits(), layers, Entanglement::Full)
}
