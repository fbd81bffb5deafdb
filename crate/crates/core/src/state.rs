//! Dense statevector simulation.
//!
//! Amplitudes are stored in computational-basis order with qubit 0 as the
//! most significant bit. Gates act in place on strided amplitude pairs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// A gate from the set used by real-amplitude circuits and the ancilla
/// metric circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `R_Y(angle) = exp(-i angle Y / 2)`.
    Ry {
        target: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    H(usize),
    Y(usize),
    /// Controlled-Y.
    Cy {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn target(&self) -> usize {
        match *self {
            Gate::Ry { target, .. } | Gate::Cnot { target, .. } | Gate::Cy { target, .. } => target,
            Gate::H(q) | Gate::Y(q) => q,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Cnot { control, .. } | Gate::Cy { control, .. } => Some(control),
            _ => None,
        }
    }

    /// The inverse gate. Every gate except `Ry` is self-inverse.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Ry { target, angle } => Gate::Ry {
                target,
                angle: -angle,
            },
            g => g,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let target = self.target();
        if target >= n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: target,
                n_qubits,
            });
        }
        if let Some(control) = self.control() {
            if control >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: control,
                    n_qubits,
                });
            }
            if control == target {
                return Err(Error::ControlEqualsTarget(control));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    ///
    /// # Panics
    /// If `index >= 2^n_qubits` or `n_qubits == 0`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits >= 1, "a statevector needs at least one qubit");
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index {index} out of range");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps amplitudes whose length is a power of two and whose norm is 1
    /// within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.max(2).next_power_of_two(),
                found: dim,
            });
        }
        let norm = libm::sqrt(norm_sqr(&amplitudes));
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Like [`Statevector::from_amplitudes`] but rescales to unit norm first.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = libm::sqrt(norm_sqr(&amplitudes));
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(norm_sqr(&self.amplitudes))
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::Ry { target, angle } => {
                let (s, c) = libm::sincos(angle / 2.0);
                self.for_each_pair(self.mask(target), 0, |a0, a1| {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c - x1 * s;
                    *a1 = x0 * s + x1 * c;
                });
            }
            Gate::H(target) => {
                let r = core::f64::consts::FRAC_1_SQRT_2;
                self.for_each_pair(self.mask(target), 0, |a0, a1| {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = (x0 + x1) * r;
                    *a1 = (x0 - x1) * r;
                });
            }
            Gate::Y(target) => self.for_each_pair(self.mask(target), 0, apply_y),
            Gate::Cnot { control, target } => {
                self.for_each_pair(self.mask(target), self.mask(control), core::mem::swap)
            }
            Gate::Cy { control, target } => {
                self.for_each_pair(self.mask(target), self.mask(control), apply_y)
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.apply(g))
    }

    /// Visits every amplitude pair `(i, i | target_mask)` with the target bit
    /// clear in `i` and all bits of `control_mask` set.
    fn for_each_pair(
        &mut self,
        target_mask: usize,
        control_mask: usize,
        mut f: impl FnMut(&mut Complex64, &mut Complex64),
    ) {
        let dim = self.amplitudes.len();
        let mut block = 0;
        while block < dim {
            for i in block..block + target_mask {
                if i & control_mask == control_mask {
                    let (lo, hi) = self.amplitudes.split_at_mut(i + target_mask);
                    f(&mut lo[i], &mut hi[0]);
                }
            }
            block += 2 * target_mask;
        }
    }

    /// `P|self⟩` for a Pauli string, with the `i^{#Y}` phase included.
    pub fn apply_pauli(&self, pauli: &PauliString) -> Result<Statevector> {
        check_len(pauli.len(), self.n_qubits)?;
        let masks = pauli.masks();
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, &amp) in self.amplitudes.iter().enumerate() {
            out[b ^ masks.flip] += masks.phase(b) * amp;
        }
        Ok(Statevector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }
}

fn apply_y(a0: &mut Complex64, a1: &mut Complex64) {
    let (x0, x1) = (*a0, *a1);
    *a0 = Complex64::new(x1.im, -x1.re);
    *a1 = Complex64::new(-x0.im, x0.re);
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

fn check_len(found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Returns a copy of `state` with `gate` applied.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `⟨a|b⟩`, conjugating `a`.
pub fn inner_product(a: &Statevector, b: &Statevector) -> Result<Complex64> {
    check_len(b.n_qubits, a.n_qubits)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `arccos √(⟨a|b⟩⟨b|a⟩)`, in `[0, π/2]`.
pub fn fubini_study_distance(a: &Statevector, b: &Statevector) -> Result<f64> {
    let overlap = inner_product(a, b)?.norm_sqr().clamp(0.0, 1.0);
    Ok(libm::acos(libm::sqrt(overlap)))
}

/// `⟨state|P|state⟩`.
pub fn pauli_expectation(state: &Statevector, pauli: &PauliString) -> Result<f64> {
    check_len(pauli.len(), state.n_qubits)?;
    let masks = pauli.masks();
    let amps = state.amplitudes();
    let value: Complex64 = amps
        .iter()
        .enumerate()
        .map(|(b, &amp)| amps[b ^ masks.flip].conj() * masks.phase(b) * amp)
        .sum();
    debug_assert!(
        value.im.abs() < 1e-12,
        "expectation of a Hermitian Pauli string has imaginary part {}",
        value.im
    );
    Ok(value.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauli(other)),
        }
    }
}

impl From<Pauli> for char {
    fn from(p: Pauli) -> char {
        match p {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// One Pauli letter per qubit; letter `i` acts on qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliString(Vec<Pauli>);

/// Bit masks describing how a Pauli string acts on basis states:
/// `P|b⟩ = i^{n_y} (-1)^{popcount(b & sign)} |b ^ flip⟩`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub n_y: u32,
}

impl PauliMasks {
    pub fn phase(&self, b: usize) -> Complex64 {
        let base = match self.n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if (b & self.sign).count_ones().is_multiple_of(2) {
            base
        } else {
            -base
        }
    }
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self(letters)
    }

    /// Identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// A string with `letter` on each listed qubit and identity elsewhere.
    pub fn with_ops(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in ops {
            letters[q] = p;
        }
        Self(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    pub(crate) fn masks(&self) -> PauliMasks {
        let n = self.0.len();
        let mut masks = PauliMasks {
            flip: 0,
            sign: 0,
            n_y: 0,
        };
        for (q, &p) in self.0.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => masks.flip |= bit,
                Pauli::Z => masks.sign |= bit,
                Pauli::Y => {
                    masks.flip |= bit;
                    masks.sign |= bit;
                    masks.n_y += 1;
                }
            }
        }
        masks
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use fmt::Write;
        self.0.iter().try_for_each(|&p| f.write_char(p.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn approx(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12
    }

    fn plus() -> Statevector {
        let mut s = Statevector::zero(1);
        s.apply(&Gate::H(0)).unwrap();
        s
    }

    #[test]
    fn ry_half_pi_on_zero() {
        let s = apply_gate(
            &Statevector::zero(1),
            &Gate::Ry {
                target: 0,
                angle: FRAC_PI_2,
            },
        )
        .unwrap();
        assert!(approx(s.amplitudes()[0], FRAC_1_SQRT_2, 0.0));
        assert!(approx(s.amplitudes()[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn cnot_truth_table_msb_convention() {
        // |10⟩ has qubit 0 set, index 2.
        let s = apply_gate(
            &Statevector::basis(2, 0b10),
            &Gate::Cnot {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert_eq!(s, Statevector::basis(2, 0b11));
        let s = apply_gate(
            &Statevector::basis(2, 0b01),
            &Gate::Cnot {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert_eq!(s, Statevector::basis(2, 0b01));
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let mut s = plus();
        s.apply(&Gate::H(0)).unwrap();
        assert!(approx(s.amplitudes()[0], 1.0, 0.0));
        assert!(approx(s.amplitudes()[1], 0.0, 0.0));
    }

    #[test]
    fn y_gate_phases() {
        let s = apply_gate(&Statevector::zero(1), &Gate::Y(0)).unwrap();
        assert!(approx(s.amplitudes()[1], 0.0, 1.0));
        let s = apply_gate(&Statevector::basis(1, 1), &Gate::Y(0)).unwrap();
        assert!(approx(s.amplitudes()[0], 0.0, -1.0));
    }

    #[test]
    fn controlled_y_respects_control() {
        let s = apply_gate(
            &Statevector::basis(2, 0b00),
            &Gate::Cy {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert_eq!(s, Statevector::basis(2, 0));
        let s = apply_gate(
            &Statevector::basis(2, 0b10),
            &Gate::Cy {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert!(approx(s.amplitudes()[0b11], 0.0, 1.0));
    }

    #[test]
    fn gate_index_errors() {
        let mut s = Statevector::zero(2);
        assert_eq!(
            s.apply(&Gate::H(2)),
            Err(Error::QubitOutOfRange {
                qubit: 2,
                n_qubits: 2
            })
        );
        assert_eq!(
            s.apply(&Gate::Cnot {
                control: 1,
                target: 1
            }),
            Err(Error::ControlEqualsTarget(1))
        );
        assert!(s
            .apply(&Gate::Cy {
                control: 5,
                target: 0
            })
            .is_err());
    }

    #[test]
    fn inner_products() {
        let zero = Statevector::zero(1);
        let one = Statevector::basis(1, 1);
        assert!(approx(inner_product(&zero, &zero).unwrap(), 1.0, 0.0));
        assert!(approx(inner_product(&zero, &one).unwrap(), 0.0, 0.0));
        assert!(approx(
            inner_product(&zero, &plus()).unwrap(),
            FRAC_1_SQRT_2,
            0.0
        ));
        assert!(inner_product(&zero, &Statevector::zero(2)).is_err());
    }

    #[test]
    fn fubini_study_examples() {
        let zero = Statevector::zero(1);
        let one = Statevector::basis(1, 1);
        assert!(fubini_study_distance(&zero, &zero).unwrap().abs() < 1e-7);
        assert!((fubini_study_distance(&zero, &one).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!((fubini_study_distance(&zero, &plus()).unwrap() - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn pauli_expectation_examples() {
        let s = Statevector::zero(2);
        assert_eq!(pauli_expectation(&s, &"ZI".parse().unwrap()).unwrap(), 1.0);
        assert_eq!(pauli_expectation(&s, &"XX".parse().unwrap()).unwrap(), 0.0);
        let mut bell = Statevector::zero(2);
        bell.apply(&Gate::H(0)).unwrap();
        bell.apply(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        let xx = pauli_expectation(&bell, &"XX".parse().unwrap()).unwrap();
        assert!((xx - 1.0).abs() < 1e-12);
        let yy = pauli_expectation(&bell, &"YY".parse().unwrap()).unwrap();
        assert!((yy + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_parsing() {
        assert_eq!("ZA".parse::<PauliString>(), Err(Error::InvalidPauli('A')));
        let p: PauliString = "IXYZ".parse().unwrap();
        assert_eq!(alloc::format!("{p}"), "IXYZ");
        assert!(pauli_expectation(&Statevector::zero(3), &p).is_err());
    }

    #[test]
    fn from_amplitudes_validates() {
        let c = |x| Complex64::new(x, 0.0);
        assert!(Statevector::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]).is_err());
        assert!(Statevector::from_amplitudes(vec![c(1.0), c(1.0)]).is_err());
        let s = Statevector::normalized(vec![c(1.0), c(1.0)]).unwrap();
        assert_eq!(s.n_qubits(), 1);
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }
}
