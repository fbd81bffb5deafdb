//! Pauli-term text files.
//!
//! One term per line: a real coefficient followed by a Pauli string over
//! `I X Y Z`, qubit 0 first, e.g. `0.2 XX`. Blank lines and text after `#`
//! are ignored. All strings must have the same length.

use std::fs;
use std::path::Path;

use qngd_core::PauliHamiltonian;

use crate::HarnessError;

pub fn load_pauli_file(path: &Path) -> Result<PauliHamiltonian, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_owned(),
        source,
    })?;
    PauliHamiltonian::parse(&text).map_err(|source| HarnessError::PauliFile {
        path: path.to_owned(),
        source,
    })
}

/// Inverse of [`load_pauli_file`]'s grammar.
pub fn format_pauli_terms(h: &PauliHamiltonian) -> String {
    h.terms()
        .iter()
        .map(|t| format!("{} {}\n", t.coefficient, t.pauli))
        .collect()
}
