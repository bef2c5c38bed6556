use thiserror::Error;

use crate::lattice::Color;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid torus {l1}x{l2}: {reason}")]
    InvalidTorus { l1: usize, l2: usize, reason: String },

    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{0} qubits exceed the 128-qubit limit of the bit-mask representation")]
    TooManyQubits(usize),

    #[error("cannot parse Pauli string {text:?}: {reason}")]
    ParsePauli { text: String, reason: String },

    #[error("generators do not commute (generators {0} and {1})")]
    NonCommuting(usize, usize),

    #[error("generated group contains a non-trivial multiple of the identity")]
    MinusIdentity,

    #[error("coupling {name} = {value} outside [0, 1]")]
    CouplingOutOfRange { name: &'static str, value: f64 },

    #[error("malformed lattice: {0}")]
    MalformedLattice(String),

    #[error("unsupported term {term} in {frame} frame: {reason}")]
    UnsupportedTerm {
        term: String,
        frame: &'static str,
        reason: String,
    },

    #[error("image term {0} couples Ising qubits of different colors")]
    CrossColorTerm(String),

    #[error("Hilbert space dimension 2^{n} exceeds the limit 2^{limit_log2} for {method}")]
    DimensionOverflow {
        n: usize,
        limit_log2: u32,
        method: &'static str,
    },

    #[error("eigensolver did not converge after {iterations} restarts (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("operator is not representable by a real matrix in the computational basis")]
    NotReal,

    #[error("operator is not hermitian: imaginary expectation {0:e}")]
    NonHermitian(f64),

    #[error("plaquettes {i} and {j} are not both {color} (or coincide)")]
    StringEndpoints { i: usize, j: usize, color: Color },

    #[error("unknown anyon label {0:?}")]
    UnknownAnyon(String),

    #[error("cannot condense {label}: it is not a boson")]
    NotBoson { label: String },

    #[error("inherited {what} is ill-defined on condensation classes")]
    InconsistentQuotient { what: &'static str },

    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
