use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ansatz::Ansatz;
use crate::hamiltonian::{Estimator, PauliHamiltonian};
use crate::ledger::CircuitLedger;
use crate::metric::{self, MetricMatrix, MetricMode};
use crate::{gradient, Error, Result};

/// An ansatz, the observable it is scored against, and how expectations
/// are estimated. Every circuit evaluation made through it is counted in
/// its [`CircuitLedger`].
#[derive(Debug)]
pub struct Problem<'a> {
    pub ansatz: &'a Ansatz,
    pub hamiltonian: &'a PauliHamiltonian,
    pub estimator: Estimator,
    pub ledger: CircuitLedger,
}

impl<'a> Problem<'a> {
    pub fn new(
        ansatz: &'a Ansatz,
        hamiltonian: &'a PauliHamiltonian,
        estimator: Estimator,
    ) -> Result<Self> {
        if ansatz.n_qubits() != hamiltonian.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: hamiltonian.n_qubits(),
                found: ansatz.n_qubits(),
            });
        }
        estimator.validate()?;
        Ok(Self {
            ansatz,
            hamiltonian,
            estimator,
            ledger: CircuitLedger::new(),
        })
    }

    pub fn exact(ansatz: &'a Ansatz, hamiltonian: &'a PauliHamiltonian) -> Result<Self> {
        Self::new(ansatz, hamiltonian, Estimator::Exact)
    }

    pub fn n_params(&self) -> usize {
        self.ansatz.n_params()
    }

    /// `f(θ) = ⟨φ(θ)|H|φ(θ)⟩`; one energy evaluation.
    pub fn energy(&self, theta: &[f64]) -> Result<f64> {
        let state = self.ansatz.prepare_state(theta)?;
        let estimator = match self.estimator {
            Estimator::Exact => Estimator::Exact,
            Estimator::Shots { shots, seed } => Estimator::Shots {
                shots,
                seed: derive_seed(seed, self.ledger.next_draw()),
            },
        };
        let e = self.hamiltonian.energy(&state, &estimator)?;
        self.ledger.record_energy(1);
        Ok(e)
    }

    pub fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        gradient::parameter_shift_gradient(self, theta)
    }

    pub fn metric(&self, theta: &[f64], mode: MetricMode) -> Result<MetricMatrix> {
        match mode {
            MetricMode::Identity => Ok(MetricMatrix::identity(self.n_params())),
            MetricMode::BlockDiagonal => metric::block_diagonal_metric(self, theta),
            MetricMode::Full => metric::full_fubini_metric(self, theta),
        }
    }

    /// RNG for one batch of metric-circuit samples, or `None` in exact mode.
    pub(crate) fn shot_rng(&self) -> Option<(u64, ChaCha8Rng)> {
        match self.estimator {
            Estimator::Exact => None,
            Estimator::Shots { shots, seed } => Some((
                shots,
                ChaCha8Rng::seed_from_u64(derive_seed(seed, self.ledger.next_draw())),
            )),
        }
    }
}

/// SplitMix64 finalizer over `seed ^ index`.
fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
