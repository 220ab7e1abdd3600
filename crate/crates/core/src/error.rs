use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register of {0} qubits is outside the supported range 1..=8")]
    Capacity(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("probability vector sums to {0}, expected 1")]
    Normalization(f64),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}: no data rows")]
    EmptyTable(PathBuf),
    #[error("bond length {r} not in coefficient table (nearest rows: {nearest:?})")]
    Lookup { r: f64, nearest: Vec<f64> },
    #[error("expectation value {value} of {term} lies outside [-1, 1]")]
    Range { term: &'static str, value: f64 },
    #[error("expected {expected} items, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("response matrix column {0} is all zero")]
    SingularResponse(usize),
    #[error("post-selection discarded all {0} shots")]
    AllDiscarded(u64),
    #[error("duplicate-circuit denominator {denominator} is below the stability floor {floor}")]
    UnstableDenominator { denominator: f64, floor: f64 },
    #[error("state purity {0} is too small for the distilled ratio")]
    Degenerate(f64),
    #[error("malformed bitstring {0:?}")]
    Bitstring(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
