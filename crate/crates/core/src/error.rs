use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PauliError {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("invalid Pauli character {ch:?} at position {position}")]
    InvalidChar { ch: char, position: usize },
    #[error("empty Pauli string")]
    Empty,
    #[error("Clifford images of X and Z must anticommute")]
    CommutingImages,
    #[error("invalid single-qubit Clifford {0:?}, expected e.g. \"+Z+X\"")]
    InvalidClifford(String),
    #[error("Pauli {0} is not Hermitian (phase ±i)")]
    NotHermitian(String),
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("invalid character {0:?} in Pauli string")]
    InvalidCharacter(char),
    #[error("Pauli string has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cannot parse coefficient {0:?}")]
    BadCoefficient(String),
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("expected \"<coefficient> <pauli string>\"")]
    MissingField,
    #[error("Hamiltonian has no non-identity terms")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsolationError {
    #[error("term index {index} out of range ({len} terms)")]
    InvalidTerm { index: usize, len: usize },
    #[error("schedule needs at least one layer")]
    NoLayers,
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DerivationError {
    #[error("commutator of {left} and {right} vanishes")]
    VanishingCommutator { left: String, right: String },
    #[error("rescale factor must be positive, got {0}")]
    NonPositiveFactor(f64),
    #[error("combine needs at least one child")]
    EmptyCombine,
    #[error("replay mismatch at {node} node: cached {cached}, recomputed {recomputed}")]
    ReplayMismatch {
        node: &'static str,
        cached: String,
        recomputed: String,
    },
    #[error("generator leaf must be a single Pauli term, got {0}")]
    NotSingleTerm(String),
    #[error("{0} is not in the closure")]
    NotInClosure(String),
    #[error("malformed derivation record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Isolation(#[from] IsolationError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("Hamiltonian is not odd entangling: {0}")]
    NotOddEntangling(String),
    #[error("Hamiltonian is not entangling")]
    NotEntangling,
    #[error("target {0} has even weight; odd Hamiltonians generate only odd strings")]
    EvenTarget(String),
    #[error("target support must be an odd-sized subset of the source support")]
    BadSupport,
    #[error("source term must have odd weight")]
    EvenSource,
    #[error("target has {found} qubits, expected {expected}")]
    TargetSize { expected: usize, found: usize },
    #[error("identity target")]
    IdentityTarget,
    #[error("target {target} is unreachable with qubit {ancilla} as the ancilla")]
    AncillaNotIsolated { target: String, ancilla: usize },
    #[error("target {0} is not reachable from this Hamiltonian")]
    Unreachable(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("{num_qubits} qubits exceeds the dense-matrix cap of {cap}")]
    SizeCap { num_qubits: usize, cap: usize },
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("Trotter step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("unevolvable leaf: {0}")]
    UnevolvableLeaf(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}
