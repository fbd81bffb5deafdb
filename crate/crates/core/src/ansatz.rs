//! Layered real-amplitude ansatze.
//!
//! A rotation layer puts one `R_Y(2a)` on every qubit, where `a` is the
//! parameter value. Parameters are numbered layer-major, qubit-minor.

use alloc::vec::Vec;
use core::ops::Range;

use crate::state::{Gate, Statevector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Entanglement {
    /// `CNOT(i, i+1)` for `i = 0..n-1`.
    Linear,
    /// `CNOT(i, j)` for every `i < j`, control on the lower index.
    Full,
}

impl Entanglement {
    pub fn pairs(self, n_qubits: usize) -> Vec<(usize, usize)> {
        match self {
            Entanglement::Linear => (1..n_qubits).map(|j| (j - 1, j)).collect(),
            Entanglement::Full => (0..n_qubits)
                .flat_map(|i| (i + 1..n_qubits).map(move |j| (i, j)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    /// One parametrized `R_Y` per qubit.
    Rotation,
    /// CNOTs as `(control, target)`, applied in order.
    Entangling(Vec<(usize, usize)>),
    /// Arbitrary fixed gates. Anything here other than `Ry`, `Cnot` and `H`
    /// makes the prepared state complex.
    Fixed(Vec<Gate>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    layers: Vec<Layer>,
    /// Index into `layers` of each rotation layer.
    rotation_layers: Vec<usize>,
}

impl Ansatz {
    pub fn new(n_qubits: usize, layers: Vec<Layer>) -> Result<Self> {
        if n_qubits < 1 {
            return Err(Error::InvalidAnsatz("need at least one qubit"));
        }
        for layer in &layers {
            let gates: Vec<Gate> = match layer {
                Layer::Rotation => continue,
                Layer::Entangling(pairs) => pairs
                    .iter()
                    .map(|&(control, target)| Gate::Cnot { control, target })
                    .collect(),
                Layer::Fixed(gates) => gates.clone(),
            };
            for g in gates {
                let qubits = [Some(g.target()), g.control()];
                for q in qubits.into_iter().flatten() {
                    if q >= n_qubits {
                        return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
                    }
                }
                if g.control() == Some(g.target()) {
                    return Err(Error::ControlEqualsTarget(g.target()));
                }
            }
        }
        let rotation_layers: Vec<usize> = layers
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, Layer::Rotation))
            .map(|(i, _)| i)
            .collect();
        if rotation_layers.is_empty() {
            return Err(Error::InvalidAnsatz("need at least one rotation layer"));
        }
        Ok(Self {
            n_qubits,
            layers,
            rotation_layers,
        })
    }

    /// Rotation layers alternating with entangling layers, starting and
    /// ending with a rotation layer.
    pub fn real_amplitude(
        n_qubits: usize,
        n_rotation_layers: usize,
        entanglement: Entanglement,
    ) -> Result<Self> {
        if n_rotation_layers == 0 {
            return Err(Error::InvalidAnsatz("need at least one rotation layer"));
        }
        if n_qubits < 1 {
            return Err(Error::InvalidAnsatz("need at least one qubit"));
        }
        let pairs = entanglement.pairs(n_qubits);
        let mut layers = Vec::with_capacity(2 * n_rotation_layers - 1);
        for l in 0..n_rotation_layers {
            if l > 0 {
                layers.push(Layer::Entangling(pairs.clone()));
            }
            layers.push(Layer::Rotation);
        }
        Self::new(n_qubits, layers)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Total parameter count `p`.
    pub fn n_params(&self) -> usize {
        self.n_qubits * self.rotation_layers.len()
    }

    pub fn n_rotation_layers(&self) -> usize {
        self.rotation_layers.len()
    }

    /// Parameter indices of the `k`-th rotation layer.
    pub fn block(&self, k: usize) -> Range<usize> {
        k * self.n_qubits..(k + 1) * self.n_qubits
    }

    /// `(rotation layer, qubit)` of a parameter.
    pub fn locate(&self, param: usize) -> (usize, usize) {
        (param / self.n_qubits, param % self.n_qubits)
    }

    /// True when every gate is real, so prepared states have real amplitudes.
    pub fn is_real_amplitude(&self) -> bool {
        self.layers.iter().all(|l| match l {
            Layer::Fixed(gates) => gates
                .iter()
                .all(|g| matches!(g, Gate::Ry { .. } | Gate::Cnot { .. } | Gate::H(_))),
            _ => true,
        })
    }

    pub(crate) fn check_params(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_params() {
            return Err(Error::DimensionMismatch {
                expected: self.n_params(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Gates of `layers[layer]`, each tagged with the parameter it carries.
    pub(crate) fn layer_gates(&self, layer: usize, theta: &[f64]) -> Vec<(Gate, Option<usize>)> {
        match &self.layers[layer] {
            Layer::Rotation => {
                let k = self
                    .rotation_layers
                    .iter()
                    .position(|&l| l == layer)
                    .expect("rotation layer is indexed");
                self.block(k)
                    .map(|param| {
                        let target = param % self.n_qubits;
                        let angle = 2.0 * theta[param];
                        (Gate::Ry { target, angle }, Some(param))
                    })
                    .collect()
            }
            Layer::Entangling(pairs) => pairs
                .iter()
                .map(|&(control, target)| (Gate::Cnot { control, target }, None))
                .collect(),
            Layer::Fixed(gates) => gates.iter().map(|&g| (g, None)).collect(),
        }
    }

    /// Every gate in circuit order, tagged with its parameter.
    pub fn gates(&self, theta: &[f64]) -> Result<Vec<(Gate, Option<usize>)>> {
        self.check_params(theta)?;
        Ok((0..self.layers.len())
            .flat_map(|l| self.layer_gates(l, theta))
            .collect())
    }

    /// Index into `layers` of the `k`-th rotation layer.
    pub(crate) fn rotation_layer_position(&self, k: usize) -> usize {
        self.rotation_layers[k]
    }

    /// `U(θ)|0…0⟩`.
    pub fn prepare_state(&self, theta: &[f64]) -> Result<Statevector> {
        self.prepare_state_prefix(theta, self.n_params())
    }

    /// The state after every gate strictly preceding the rotation that
    /// carries parameter `up_to`. `up_to == p` gives the full state.
    pub fn prepare_state_prefix(&self, theta: &[f64], up_to: usize) -> Result<Statevector> {
        self.check_params(theta)?;
        if up_to > self.n_params() {
            return Err(Error::ParameterOutOfRange {
                index: up_to,
                len: self.n_params(),
            });
        }
        let mut state = Statevector::zero(self.n_qubits);
        for (gate, param) in self.gates(theta)? {
            if param == Some(up_to) {
                break;
            }
            state.apply(&gate)?;
        }
        Ok(state)
    }

    /// State just before the `k`-th rotation layer.
    pub(crate) fn state_before_block(&self, theta: &[f64], k: usize) -> Result<Statevector> {
        self.prepare_state_prefix(theta, k * self.n_qubits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn h2_circuit_shape() {
        let a = Ansatz::real_amplitude(2, 2, Entanglement::Linear).unwrap();
        assert_eq!(a.n_params(), 4);
        assert_eq!(
            a.layers(),
            &[
                Layer::Rotation,
                Layer::Entangling(alloc::vec![(0, 1)]),
                Layer::Rotation
            ]
        );
    }

    #[test]
    fn single_qubit_single_layer() {
        let a = Ansatz::real_amplitude(1, 1, Entanglement::Linear).unwrap();
        assert_eq!(a.n_params(), 1);
        let gates = a.gates(&[0.3]).unwrap();
        assert_eq!(gates.len(), 1);
        assert_eq!(
            gates[0],
            (
                Gate::Ry {
                    target: 0,
                    angle: 0.6
                },
                Some(0)
            )
        );
    }

    #[test]
    fn full_entanglement_pairs() {
        let a = Ansatz::real_amplitude(3, 2, Entanglement::Full).unwrap();
        assert_eq!(a.n_params(), 6);
        assert_eq!(
            a.layers()[1],
            Layer::Entangling(alloc::vec![(0, 1), (0, 2), (1, 2)])
        );
        // Single qubit: entangling layers are empty.
        let a = Ansatz::real_amplitude(1, 3, Entanglement::Full).unwrap();
        assert_eq!(a.layers()[1], Layer::Entangling(alloc::vec![]));
    }

    #[test]
    fn construction_errors() {
        assert!(Ansatz::real_amplitude(2, 0, Entanglement::Linear).is_err());
        assert!(Ansatz::real_amplitude(0, 2, Entanglement::Linear).is_err());
        assert!(Ansatz::new(2, alloc::vec![Layer::Entangling(alloc::vec![(0, 1)])]).is_err());
        assert!(Ansatz::new(
            2,
            alloc::vec![Layer::Rotation, Layer::Entangling(alloc::vec![(0, 2)])]
        )
        .is_err());
        assert!(Ansatz::new(
            2,
            alloc::vec![Layer::Rotation, Layer::Entangling(alloc::vec![(1, 1)])]
        )
        .is_err());
    }

    #[test]
    fn prepare_examples() {
        let a = Ansatz::real_amplitude(2, 2, Entanglement::Linear).unwrap();
        assert_eq!(a.prepare_state(&[0.0; 4]).unwrap(), Statevector::zero(2));

        let one = Ansatz::real_amplitude(1, 1, Entanglement::Linear).unwrap();
        let s = one.prepare_state(&[FRAC_PI_4]).unwrap();
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);

        // R_Y(π/2) on qubit 0 then CNOT: (|00⟩ + |11⟩)/√2.
        let s = a.prepare_state(&[FRAC_PI_4, 0.0, 0.0, 0.0]).unwrap();
        let amps = s.amplitudes();
        assert!((amps[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((amps[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(amps[1].norm() < 1e-15 && amps[2].norm() < 1e-15);

        assert!(a.prepare_state(&[0.0; 3]).is_err());
    }

    #[test]
    fn prefix_states() {
        let a = Ansatz::real_amplitude(2, 2, Entanglement::Linear).unwrap();
        let theta = [0.3, -1.1, 0.7, 2.0];
        assert_eq!(
            a.prepare_state_prefix(&theta, 0).unwrap(),
            Statevector::zero(2)
        );
        assert_eq!(
            a.prepare_state_prefix(&theta, 4).unwrap(),
            a.prepare_state(&theta).unwrap()
        );

        let mut expected = Statevector::zero(2);
        for g in [
            Gate::Ry {
                target: 0,
                angle: 0.6,
            },
            Gate::Ry {
                target: 1,
                angle: -2.2,
            },
            Gate::Cnot {
                control: 0,
                target: 1,
            },
        ] {
            expected.apply(&g).unwrap();
        }
        assert_eq!(a.prepare_state_prefix(&theta, 2).unwrap(), expected);
        assert!(matches!(
            a.prepare_state_prefix(&theta, 5),
            Err(Error::ParameterOutOfRange { index: 5, len: 4 })
        ));
    }

    #[test]
    fn ry_count_matches_params() {
        let a = Ansatz::real_amplitude(4, 6, Entanglement::Full).unwrap();
        let theta = alloc::vec![0.1; a.n_params()];
        let n_ry = a
            .gates(&theta)
            .unwrap()
            .iter()
            .filter(|(g, _)| matches!(g, Gate::Ry { .. }))
            .count();
        assert_eq!(n_ry, a.n_params());
        assert_eq!(a.n_params(), 24);
    }

    #[test]
    fn real_amplitude_flag() {
        let a = Ansatz::real_amplitude(2, 2, Entanglement::Linear).unwrap();
        assert!(a.is_real_amplitude());
        let b = Ansatz::new(
            2,
            alloc::vec![Layer::Fixed(alloc::vec![Gate::Y(0)]), Layer::Rotation],
        )
        .unwrap();
        assert!(!b.is_real_amplitude());
    }
}
