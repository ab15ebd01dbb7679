//! Symbolic and numeric tools for simulating Hamiltonians built from Pauli
//! products, given free single-qubit control.
//!
//! The main entry points:
//!
//! * [`Hamiltonian::classify`] decides dynamic universality.
//! * [`closure::close`] computes the generated Lie algebra with provenance.
//! * [`isolation`] builds conjugate-and-add schedules that isolate one term.
//! * [`synthesis`] derives odd targets and encoded targets as
//!   [`DerivationTree`]s.
//! * [`numeric`] compiles trees to gate/evolution programs and checks them
//!   against exact dense evolution.

pub mod closure;
pub mod derivation;
pub mod error;
pub mod families;
pub mod hamiltonian;
pub mod isolation;
pub mod numeric;
pub mod pauli;
pub mod synthesis;
mod union_find;

pub use closure::{algebra_dimension, close, AlgebraKind, ClosureAlgebra, ClosureResult};
pub use derivation::{DerivationTree, Node};
pub use error::{
    DerivationError, IsolationError, NumericError, ParseError, ParseErrorKind, PauliError, SynthesisError,
};
pub use hamiltonian::{parse_hamiltonian, Algebra, Classification, Hamiltonian, Support, Term};
pub use isolation::{
    apply_schedule_symbolic, deterministic_isolation_schedule, randomized_isolation, RandomizedIsolation,
    RandomizedIsolationParams, Schedule,
};
pub use numeric::{compile, verify, CompiledProgram, DenseOperator, TrotterParams};
pub use pauli::{commutator, Axis, CliffordLayer, Letter, PhasedPauli, SignedAxis, SingleQubitClifford};
pub use synthesis::{
    derive_encoded, derive_odd_target, derive_target, find_isolating_set, reduce_odd_support, EncodedDerivation,
    IsolatingSet,
};
