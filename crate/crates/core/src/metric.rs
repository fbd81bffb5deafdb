//! Fubini-Study metric of a real-amplitude ansatz.
//!
//! For `R_Y(2a)` the derivative of the gate is `-i Y R_Y(2a)`, so with
//! `|ψᵢ⟩` the state with `Y` inserted at parameter `i`,
//! `F_ij = Re⟨ψᵢ|ψⱼ⟩ − Re(⟨∂ᵢφ|φ⟩⟨φ|∂ⱼφ⟩)`. The second term is zero for
//! real-amplitude states.
//!
//! Three routes are provided:
//!
//! - [`block_diagonal_metric`]: within each rotation layer, the covariance
//!   `⟨YᵢYⱼ⟩ − ⟨Yᵢ⟩⟨Yⱼ⟩` on the state entering the layer; cross-layer
//!   entries are zero.
//! - [`full_fubini_metric`]: the blocks above plus every cross-layer entry
//!   from an ancilla overlap circuit.
//! - [`metric_oracle`]: differentiates the statevector directly. It does not
//!   touch the ledger and exists to check the circuit routes.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::ansatz::Ansatz;
use crate::hamiltonian::Estimator;
use crate::linalg::{jacobi_eigen, jacobi_eigenvalues, RealMatrix};
use crate::problem::Problem;
use crate::state::{inner_product, pauli_expectation, Gate, Pauli, PauliString, Statevector};
use crate::{Error, Result};

/// Default eigenvalue cutoff for [`pseudo_invert`].
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MetricMode {
    /// `F = I`: plain (Euclidean) gradient descent.
    Identity,
    BlockDiagonal,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    pub matrix: RealMatrix,
    pub mode: MetricMode,
}

impl MetricMatrix {
    pub fn identity(p: usize) -> Self {
        Self {
            matrix: RealMatrix::identity(p),
            mode: MetricMode::Identity,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.n()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(jacobi_eigenvalues(&self.matrix)?
            .first()
            .copied()
            .unwrap_or(0.0))
    }
}

/// Metric circuits needed for one metric evaluation: one Y-basis
/// measurement per rotation block plus, for the full metric, one ancilla
/// circuit per cross-layer parameter pair.
pub fn metric_circuit_count(ansatz: &Ansatz, mode: MetricMode) -> u64 {
    let blocks = ansatz.n_rotation_layers() as u64;
    let n = ansatz.n_qubits() as u64;
    match mode {
        MetricMode::Identity => 0,
        MetricMode::BlockDiagonal => blocks,
        MetricMode::Full => blocks + n * n * blocks * (blocks.saturating_sub(1)) / 2,
    }
}

fn require_real(ansatz: &Ansatz) -> Result<()> {
    if ansatz.is_real_amplitude() {
        Ok(())
    } else {
        Err(Error::InvalidAnsatz(
            "circuit metric assumes real amplitudes; use metric_oracle",
        ))
    }
}

fn estimate(exact: f64, rng: &mut Option<(u64, ChaCha8Rng)>) -> f64 {
    match rng {
        None => exact,
        Some((shots, rng)) => Estimator::sample_pm1(exact, *shots, rng),
    }
}

/// Fills the within-layer blocks of `f`.
fn fill_blocks(
    problem: &Problem<'_>,
    theta: &[f64],
    f: &mut RealMatrix,
    rng: &mut Option<(u64, ChaCha8Rng)>,
) -> Result<()> {
    let ansatz = problem.ansatz;
    let n = ansatz.n_qubits();
    for k in 0..ansatz.n_rotation_layers() {
        let state = ansatz.state_before_block(theta, k)?;
        let mut y = Vec::with_capacity(n);
        for q in 0..n {
            let exact = pauli_expectation(&state, &PauliString::with_ops(n, &[(q, Pauli::Y)]))?;
            y.push(estimate(exact, rng));
        }
        let base = k * n;
        for a in 0..n {
            f[(base + a, base + a)] = 1.0 - y[a] * y[a];
            for b in a + 1..n {
                let yy = PauliString::with_ops(n, &[(a, Pauli::Y), (b, Pauli::Y)]);
                let exact = pauli_expectation(&state, &yy)?;
                let value = estimate(exact, rng) - y[a] * y[b];
                f[(base + a, base + b)] = value;
                f[(base + b, base + a)] = value;
            }
        }
    }
    problem
        .ledger
        .record_metric(ansatz.n_rotation_layers() as u64);
    Ok(())
}

/// Block-diagonal approximation: cross-layer entries are exactly zero.
pub fn block_diagonal_metric(problem: &Problem<'_>, theta: &[f64]) -> Result<MetricMatrix> {
    let ansatz = problem.ansatz;
    require_real(ansatz)?;
    ansatz.check_params(theta)?;
    let mut f = RealMatrix::zeros(ansatz.n_params());
    let mut rng = problem.shot_rng();
    fill_blocks(problem, theta, &mut f, &mut rng)?;
    Ok(MetricMatrix {
        matrix: f,
        mode: MetricMode::BlockDiagonal,
    })
}

/// Full metric: blocks plus ancilla overlap circuits for every cross-layer
/// pair.
pub fn full_fubini_metric(problem: &Problem<'_>, theta: &[f64]) -> Result<MetricMatrix> {
    let ansatz = problem.ansatz;
    require_real(ansatz)?;
    ansatz.check_params(theta)?;
    let p = ansatz.n_params();
    let mut f = RealMatrix::zeros(p);
    let mut rng = problem.shot_rng();
    fill_blocks(problem, theta, &mut f, &mut rng)?;

    let mut circuits = 0;
    for i in 0..p {
        let (layer_i, _) = ansatz.locate(i);
        for j in ansatz.block(layer_i).end..p {
            let exact = overlap_circuit(ansatz, theta, i, j)?;
            let value = estimate(exact, &mut rng);
            f[(i, j)] = value;
            f[(j, i)] = value;
            circuits += 1;
        }
    }
    problem.ledger.record_metric(circuits);
    Ok(MetricMatrix {
        matrix: f,
        mode: MetricMode::Full,
    })
}

/// Ancilla overlap circuit for a cross-layer pair `i < j`, returning the
/// ancilla `⟨Z⟩ = Re⟨ψᵢ|ψⱼ⟩`.
///
/// The ancilla is an extra last qubit prepared in `|+⟩`. A controlled-Y on
/// `i`'s qubit goes in just before `i`'s rotation layer, a controlled-Y on
/// `j`'s qubit just after `j`'s rotation layer, then the ancilla gets a
/// Hadamard. Gates after the second insertion act identically on both
/// branches and are omitted.
pub fn overlap_circuit(ansatz: &Ansatz, theta: &[f64], i: usize, j: usize) -> Result<f64> {
    let n = ansatz.n_qubits();
    let (layer_i, qubit_i) = ansatz.locate(i);
    let (layer_j, qubit_j) = ansatz.locate(j);
    debug_assert!(layer_i < layer_j);
    let ancilla = n;
    let start = ansatz.rotation_layer_position(layer_i);
    let stop = ansatz.rotation_layer_position(layer_j);

    let mut state = Statevector::zero(n + 1);
    state.apply(&Gate::H(ancilla))?;
    for layer in 0..=stop {
        if layer == start {
            state.apply(&Gate::Cy {
                control: ancilla,
                target: qubit_i,
            })?;
        }
        for (gate, _) in ansatz.layer_gates(layer, theta) {
            state.apply(&gate)?;
        }
    }
    state.apply(&Gate::Cy {
        control: ancilla,
        target: qubit_j,
    })?;
    state.apply(&Gate::H(ancilla))?;
    pauli_expectation(
        &state,
        &PauliString::with_ops(n + 1, &[(ancilla, Pauli::Z)]),
    )
}

/// `|∂ᵢφ⟩` for every parameter, by swapping the `i`-th rotation for its
/// derivative `-i Y R_Y(2a)`.
pub fn state_derivatives(ansatz: &Ansatz, theta: &[f64]) -> Result<Vec<Statevector>> {
    let gates = ansatz.gates(theta)?;
    (0..ansatz.n_params())
        .map(|i| {
            let mut state = Statevector::zero(ansatz.n_qubits());
            for (gate, param) in &gates {
                state.apply(gate)?;
                if *param == Some(i) {
                    state.apply(&Gate::Y(gate.target()))?;
                    let scaled = state
                        .into_amplitudes()
                        .into_iter()
                        .map(|z| z * Complex64::new(0.0, -1.0))
                        .collect();
                    state = Statevector::from_amplitudes(scaled)?;
                }
            }
            Ok(state)
        })
        .collect()
}

/// `⟨∂ᵢφ|φ⟩` for every parameter.
pub fn berry_connection(ansatz: &Ansatz, theta: &[f64]) -> Result<Vec<Complex64>> {
    let phi = ansatz.prepare_state(theta)?;
    state_derivatives(ansatz, theta)?
        .iter()
        .map(|d| inner_product(d, &phi))
        .collect()
}

/// Reference metric `Re(⟨∂ᵢφ|∂ⱼφ⟩ − ⟨∂ᵢφ|φ⟩⟨φ|∂ⱼφ⟩)` from exact statevector
/// derivatives. Valid for any ansatz.
pub fn metric_oracle(ansatz: &Ansatz, theta: &[f64]) -> Result<MetricMatrix> {
    let phi = ansatz.prepare_state(theta)?;
    let derivs = state_derivatives(ansatz, theta)?;
    let berry: Vec<Complex64> = derivs
        .iter()
        .map(|d| inner_product(d, &phi))
        .collect::<Result<_>>()?;
    let p = derivs.len();
    let mut f = RealMatrix::zeros(p);
    for i in 0..p {
        for j in i..p {
            let g = inner_product(&derivs[i], &derivs[j])? - berry[i] * berry[j].conj();
            f[(i, j)] = g.re;
            f[(j, i)] = g.re;
        }
    }
    Ok(MetricMatrix {
        matrix: f,
        mode: MetricMode::Full,
    })
}

/// Eigenvalue-thresholded pseudo-inverse: `Q Λ⁺ Qᵀ` where `Λ⁺` inverts the
/// eigenvalues above `epsilon` and zeroes the rest, negative ones included.
pub fn pseudo_invert(f: &RealMatrix, epsilon: f64) -> Result<RealMatrix> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig("epsilon must be positive"));
    }
    let asym = f.asymmetry();
    if asym > 1e-8 {
        return Err(Error::Asymmetric(asym));
    }
    let n = f.n();
    let mut sym = f.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (f[(i, j)] + f[(j, i)]);
            sym[(i, j)] = avg;
            sym[(j, i)] = avg;
        }
    }
    let eig = jacobi_eigen(&sym)?;
    let mut inv = RealMatrix::zeros(n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= epsilon {
            continue;
        }
        let scale = 1.0 / lambda;
        for r in 0..n {
            let vr = eig.vectors[(r, k)] * scale;
            if vr == 0.0 {
                continue;
            }
            for c in 0..n {
                inv[(r, c)] += vr * eig.vectors[(c, k)];
            }
        }
    }
    Ok(inv)
}
