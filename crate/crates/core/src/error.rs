use alloc::string::String;
use core::fmt;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    QubitOutOfRange {
        qubit: usize,
        n_qubits: usize,
    },
    ControlEqualsTarget(usize),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    NotNormalized(f64),
    InvalidPauli(char),
    /// Line numbers are 1-based.
    Parse {
        line: usize,
        message: String,
    },
    NoTerms,
    TooManyQubits {
        n_qubits: usize,
        max: usize,
    },
    NonHermitian(f64),
    Asymmetric(f64),
    NotConverged {
        sweeps: usize,
    },
    InvalidAnsatz(&'static str),
    ParameterOutOfRange {
        index: usize,
        len: usize,
    },
    InvalidConfig(&'static str),
    InvalidModel(&'static str),
    DegenerateDirection,
    NonFinite(&'static str),
    MissingExactEnergy,
    LedgerMismatch {
        expected: u64,
        recorded: u64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::QubitOutOfRange { qubit, n_qubits } => {
                write!(f, "qubit {qubit} out of range for {n_qubits} qubits")
            }
            Error::ControlEqualsTarget(q) => write!(f, "control and target are both qubit {q}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotNormalized(norm) => write!(f, "state has norm {norm}, expected 1"),
            Error::InvalidPauli(c) => write!(f, "invalid Pauli letter {c:?}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::NoTerms => f.write_str("no terms"),
            Error::TooManyQubits { n_qubits, max } => {
                write!(f, "{n_qubits} qubits exceeds the dense limit of {max}")
            }
            Error::NonHermitian(r) => write!(f, "matrix is not Hermitian (residue {r:e})"),
            Error::Asymmetric(r) => write!(f, "matrix is not symmetric (residue {r:e})"),
            Error::NotConverged { sweeps } => {
                write!(f, "eigensolver did not converge after {sweeps} sweeps")
            }
            Error::InvalidAnsatz(why) => write!(f, "invalid ansatz: {why}"),
            Error::ParameterOutOfRange { index, len } => {
                write!(
                    f,
                    "parameter index {index} out of range for {len} parameters"
                )
            }
            Error::InvalidConfig(why) => write!(f, "invalid optimizer config: {why}"),
            Error::InvalidModel(why) => write!(f, "invalid model: {why}"),
            Error::DegenerateDirection => {
                f.write_str("search direction must be finite and nonzero")
            }
            Error::NonFinite(what) => write!(f, "non-finite {what}"),
            Error::MissingExactEnergy => {
                f.write_str("exact-gap stopping rule needs an exact ground energy")
            }
            Error::LedgerMismatch { expected, recorded } => write!(
                f,
                "circuit ledger recorded {recorded} evaluations, trace accounts for {expected}"
            ),
        }
    }
}

impl core::error::Error for Error {}
