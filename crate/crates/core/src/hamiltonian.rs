//! Pauli-sum observables.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::linalg::{lanczos_ground_energy, ComplexMatrix};
use crate::state::{pauli_expectation, PauliString, Statevector};
use crate::{Error, Result};

/// Largest register `dense_matrix` and `exact_ground_energy` accept.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Largest register for which the full spectrum is computed by Jacobi.
pub const MAX_SPECTRUM_QUBITS: usize = 10;
/// Up to this dimension the ground energy comes from a dense Jacobi solve;
/// above it Lanczos runs matrix-free.
const DENSE_GROUND_DIM: usize = 64;

/// How expectation values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Estimator {
    #[default]
    Exact,
    /// Finite-shot sampling. Every Pauli term is measured `shots` times in its
    /// eigenbasis; the draws come from ChaCha8 seeded with `seed`.
    Shots { shots: u64, seed: u64 },
}

impl Estimator {
    pub fn is_exact(&self) -> bool {
        matches!(self, Estimator::Exact)
    }

    /// Estimates `⟨P⟩` given its exact value, by drawing the number of `+1`
    /// outcomes among `shots` measurements.
    pub(crate) fn sample_pm1(exact: f64, shots: u64, rng: &mut ChaCha8Rng) -> f64 {
        let p_plus = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
        let hits = Binomial::new(shots, p_plus)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        2.0 * hits as f64 / shots as f64 - 1.0
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Estimator::Shots { shots: 0, .. } => {
                Err(Error::InvalidConfig("shot count must be at least 1"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Term {
    pub coefficient: f64,
    pub pauli: PauliString,
}

/// `Σ cᵢ Pᵢ` with real coefficients. Duplicate strings are merged on
/// construction, keeping the position of the first occurrence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl PauliHamiltonian {
    pub fn new(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (f64, PauliString)>,
    ) -> Result<Self> {
        let mut merged: Vec<Term> = Vec::new();
        for (coefficient, pauli) in terms {
            if pauli.len() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: pauli.len(),
                });
            }
            if !coefficient.is_finite() {
                return Err(Error::NonFinite("coefficient"));
            }
            match merged.iter_mut().find(|t| t.pauli == pauli) {
                Some(t) => t.coefficient += coefficient,
                None => merged.push(Term { coefficient, pauli }),
            }
        }
        if merged.is_empty() {
            return Err(Error::NoTerms);
        }
        Ok(Self {
            n_qubits,
            terms: merged,
        })
    }

    /// Parses the one-term-per-line text format:
    ///
    /// ```text
    /// # comment
    /// 0.4 ZI
    /// 0.4 IZ
    /// 0.2 XX
    /// ```
    ///
    /// Each line is `coefficient WHITESPACE letters`. Blank lines and lines
    /// whose first non-blank character is `#` are skipped. The register size
    /// comes from the first term.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut n_qubits = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: alloc::string::String| Error::Parse {
                line: line_no,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(coef), Some(letters), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(parse_err(
                    "expected `coefficient pauli_letters`".to_string(),
                ));
            };
            let coefficient: f64 = coef
                .parse()
                .map_err(|_| parse_err(format!("invalid coefficient {coef:?}")))?;
            if !coefficient.is_finite() {
                return Err(parse_err(format!("non-finite coefficient {coef:?}")));
            }
            let pauli: PauliString = letters.parse().map_err(|e| match e {
                Error::InvalidPauli(c) => parse_err(format!("invalid Pauli letter {c:?}")),
                other => other,
            })?;
            let n = *n_qubits.get_or_insert(pauli.len());
            if pauli.len() != n {
                return Err(parse_err(format!(
                    "term {letters} has {} letters, expected {n}",
                    pauli.len()
                )));
            }
            terms.push((coefficient, pauli));
        }
        let n = n_qubits.ok_or(Error::NoTerms)?;
        Self::new(n, terms)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `Σ |cᵢ|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// `⟨state|H|state⟩`, exact or shot-sampled.
    pub fn energy(&self, state: &Statevector, estimator: &Estimator) -> Result<f64> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        match *estimator {
            Estimator::Exact => self.terms.iter().try_fold(0.0, |acc, t| {
                Ok(acc + t.coefficient * pauli_expectation(state, &t.pauli)?)
            }),
            Estimator::Shots { shots, seed } => {
                estimator.validate()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                self.terms.iter().try_fold(0.0, |acc, t| {
                    let value = if t.pauli.is_identity() {
                        1.0
                    } else {
                        let exact = pauli_expectation(state, &t.pauli)?;
                        Estimator::sample_pm1(exact, shots, &mut rng)
                    };
                    Ok(acc + t.coefficient * value)
                })
            }
        }
    }

    /// `H v` without forming the matrix.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); v.len()];
        for t in &self.terms {
            let masks = t.pauli.masks();
            for (b, &amp) in v.iter().enumerate() {
                out[b ^ masks.flip] += masks.phase(b) * amp * t.coefficient;
            }
        }
        out
    }

    /// The `2^n × 2^n` matrix `Σ cᵢ Pᵢ`.
    pub fn dense_matrix(&self) -> Result<ComplexMatrix> {
        self.guard(MAX_DENSE_QUBITS)?;
        let dim = 1usize << self.n_qubits;
        let mut m = ComplexMatrix::zeros(dim);
        for t in &self.terms {
            let masks = t.pauli.masks();
            for b in 0..dim {
                m[(b ^ masks.flip, b)] += masks.phase(b) * t.coefficient;
            }
        }
        Ok(m)
    }

    /// All eigenvalues, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        self.guard(MAX_SPECTRUM_QUBITS)?;
        self.dense_matrix()?.hermitian_eigenvalues()
    }

    /// Smallest eigenvalue.
    pub fn exact_ground_energy(&self) -> Result<f64> {
        self.guard(MAX_DENSE_QUBITS)?;
        let dim = 1usize << self.n_qubits;
        if dim <= DENSE_GROUND_DIM {
            let values = self.spectrum()?;
            return Ok(values[0]);
        }
        lanczos_ground_energy(dim, 400, |v| self.apply(v))
    }

    fn guard(&self, max: usize) -> Result<()> {
        if self.n_qubits > max {
            Err(Error::TooManyQubits {
                n_qubits: self.n_qubits,
                max,
            })
        } else {
            Ok(())
        }
    }
}
