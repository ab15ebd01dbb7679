//! Conjugate-and-add schedules that isolate a single term of a Hamiltonian.
//!
//! A [`Schedule`] applies a basis-change layer `V` once and then, for each
//! Pauli layer `L`, replaces `H` by `L H L + H`. Terms anticommuting with `L`
//! cancel and commuting terms double, so `m` layers cost `2^m` evolution
//! segments.
//!
//! The deterministic schedule uses `Z` on every qubit, `X` on every qubit
//! outside the target's support and `X_p X_q` for every support pair, for
//! `2n − k + C(k,2)` layers in total. The randomized schedule draws `m` uniform
//! Pauli layers conditioned on commuting with the target; each other term
//! survives a layer with probability ½, so the failure probability is at most
//! `N / 2^m`.
//!
//! Randomized draws use ChaCha8 seeded with [`rand::SeedableRng::seed_from_u64`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{IsolationError, PauliError};
use crate::hamiltonian::{Hamiltonian, Term};
use crate::pauli::{Axis, CliffordLayer, Letter, PhasedPauli, SingleQubitClifford};

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    basis_change: CliffordLayer,
    layers: Vec<PhasedPauli>,
}

impl Schedule {
    pub fn new(basis_change: CliffordLayer, layers: Vec<PhasedPauli>) -> Result<Schedule, PauliError> {
        let n = basis_change.num_qubits();
        if let Some(l) = layers.iter().find(|l| l.num_qubits() != n) {
            return Err(PauliError::QubitMismatch {
                left: n,
                right: l.num_qubits(),
            });
        }
        Ok(Schedule {
            basis_change,
            layers: layers.into_iter().map(|l| l.unsigned()).collect(),
        })
    }

    pub fn empty(num_qubits: usize) -> Schedule {
        Schedule {
            basis_change: CliffordLayer::identity(num_qubits),
            layers: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.basis_change.num_qubits()
    }

    pub fn basis_change(&self) -> &CliffordLayer {
        &self.basis_change
    }

    /// Pauli-only layers, each stored as the Pauli product it conjugates by.
    pub fn layers(&self) -> &[PhasedPauli] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Evolution segments after all layers: `2^m`.
    pub fn segments(&self) -> f64 {
        2f64.powi(self.layers.len() as i32)
    }

    /// Factor a surviving term is multiplied by: also `2^m`.
    pub fn scale(&self) -> f64 {
        self.segments()
    }

    pub fn to_record(&self) -> ScheduleRecord {
        ScheduleRecord {
            basis_change: self.basis_change.gates().iter().map(|g| g.to_string()).collect(),
            layers: self.layers.iter().map(|l| l.to_string()).collect(),
            scale: self.scale(),
            segments: self.segments(),
        }
    }

    pub fn from_record(record: &ScheduleRecord) -> Result<Schedule, PauliError> {
        let gates = record
            .basis_change
            .iter()
            .map(|g| g.parse::<SingleQubitClifford>())
            .collect::<Result<Vec<_>, _>>()?;
        let layers = record
            .layers
            .iter()
            .map(|l| l.parse::<PhasedPauli>())
            .collect::<Result<Vec<_>, _>>()?;
        Schedule::new(CliffordLayer::new(gates), layers)
    }
}

/// JSON form of a [`Schedule`]. `basis_change` holds one `+Z+X`-style
/// Clifford per qubit (images of X and Z); `layers` are Pauli strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub basis_change: Vec<String>,
    pub layers: Vec<String>,
    pub scale: f64,
    pub segments: f64,
}

/// `L H L + H`: anticommuting terms cancel, commuting terms double.
pub fn conjugate_and_add(h: &Hamiltonian, layer: &PhasedPauli) -> Result<Hamiltonian, PauliError> {
    let mut kept = Vec::with_capacity(h.len());
    for t in h.terms() {
        if t.pauli().commutes(layer)? {
            kept.push(t.scaled(2.0));
        }
    }
    Hamiltonian::new(h.num_qubits(), kept)
}

/// Exact symbolic effect of `s` on `h`: basis change, then one
/// conjugate-and-add per layer.
pub fn apply_schedule_symbolic(h: &Hamiltonian, s: &Schedule) -> Result<Hamiltonian, PauliError> {
    let mut current = h.conjugate(&s.basis_change)?;
    for layer in &s.layers {
        current = conjugate_and_add(&current, layer)?;
    }
    Ok(current)
}

/// Basis change taking `target`'s non-identity axes to `Z`, with the image
/// coefficient made positive by folding an `X` flip into the first support
/// qubit when needed.
fn basis_change_to_z(target: &Term) -> CliffordLayer {
    let n = target.num_qubits();
    let mut layer = CliffordLayer::identity(n);
    for (q, letter) in target.pauli().letters().enumerate() {
        if let Some(axis) = letter.axis() {
            layer.set_gate(q, SingleQubitClifford::mapping(axis, Axis::Z));
        }
    }
    if target.coefficient() < 0.0 {
        if let Some(&q) = target.support().qubits().first() {
            let flip = layer.gate(q).then(&SingleQubitClifford::pauli(Letter::X));
            layer.set_gate(q, flip);
        }
    }
    layer
}

/// Deterministic isolation of term `term_index` (canonical order).
///
/// Applying the schedule leaves exactly `2^{2n−k+C(k,2)} · |c| · Z^{⊗S}`.
pub fn deterministic_isolation_schedule(
    h: &Hamiltonian,
    term_index: usize,
) -> Result<Schedule, IsolationError> {
    let target = h.terms().get(term_index).ok_or(IsolationError::InvalidTerm {
        index: term_index,
        len: h.len(),
    })?;
    let n = h.num_qubits();
    let support = target.support();
    let mut layers = Vec::new();
    for q in 0..n {
        layers.push(PhasedPauli::single(n, q, Letter::Z));
    }
    for q in (0..n).filter(|&q| !support.contains(q)) {
        layers.push(PhasedPauli::single(n, q, Letter::X));
    }
    let s = support.qubits();
    for (i, &p) in s.iter().enumerate() {
        for &q in &s[i + 1..] {
            layers.push(PhasedPauli::uniform(n, &[p, q], Letter::X));
        }
    }
    Ok(Schedule::new(basis_change_to_z(target), layers)?)
}

/// `2n − k + C(k,2)`.
pub fn deterministic_layer_count(num_qubits: usize, weight: usize) -> usize {
    2 * num_qubits - weight + weight * weight.saturating_sub(1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomizedIsolationParams {
    /// Number of layers `m ≥ 1`.
    pub m: usize,
    pub seed: u64,
    pub target: usize,
}

/// A commuting layer together with the number of uniform draws it took.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerDraw {
    pub layer: PhasedPauli,
    pub draws: u32,
}

/// Uniform layer from `{I,X,Y,Z}^n`, rejected until it commutes with `target`.
pub fn sample_commuting_layer<R: Rng + ?Sized>(target: &PhasedPauli, rng: &mut R) -> LayerDraw {
    let n = target.num_qubits();
    let mut draws = 0;
    loop {
        draws += 1;
        let mut layer = PhasedPauli::identity(n);
        for q in 0..n {
            layer.set_letter(q, Letter::ALL[rng.random_range(0..4)]);
        }
        if layer.commutes(target).expect("same size") {
            return LayerDraw { layer, draws };
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedIsolation {
    pub schedule: Schedule,
    pub result: Hamiltonian,
    /// Result is exactly `2^m` times the target term.
    pub success: bool,
    /// Total uniform draws, including rejected ones.
    pub draws: u64,
}

impl RandomizedIsolation {
    /// Fraction of uniform draws that commuted with the target.
    pub fn acceptance_rate(&self) -> f64 {
        self.schedule.layer_count() as f64 / self.draws as f64
    }
}

pub fn randomized_isolation(
    h: &Hamiltonian,
    params: &RandomizedIsolationParams,
) -> Result<RandomizedIsolation, IsolationError> {
    if params.m == 0 {
        return Err(IsolationError::NoLayers);
    }
    let target = h.terms().get(params.target).ok_or(IsolationError::InvalidTerm {
        index: params.target,
        len: h.len(),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut layers = Vec::with_capacity(params.m);
    let mut draws = 0u64;
    for _ in 0..params.m {
        let d = sample_commuting_layer(target.pauli(), &mut rng);
        draws += d.draws as u64;
        layers.push(d.layer);
    }
    let schedule = Schedule::new(CliffordLayer::identity(h.num_qubits()), layers)?;
    let result = apply_schedule_symbolic(h, &schedule)?;
    let expected = Hamiltonian::from_term(target.scaled(schedule.scale()));
    let success = result == expected;
    Ok(RandomizedIsolation {
        schedule,
        result,
        success,
        draws,
    })
}
