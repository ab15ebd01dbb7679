//! Constructive simulation of odd targets and encoded universality.

use std::fmt;

use serde::Serialize;

use crate::closure::{close, close_generators, local_leaves};
use crate::derivation::{DerivationTree, Node};
use crate::error::{DerivationError, SynthesisError};
use crate::hamiltonian::{Classification, Hamiltonian, Support, Term};
use crate::pauli::{Axis, CliffordLayer, Letter, PhasedPauli, SingleQubitClifford};
use crate::union_find::UnionFind;

/// Layer mapping the letter at each listed qubit onto `to`.
fn axis_layer(pauli: &PhasedPauli, qubits: &[usize], to: Axis) -> CliffordLayer {
    let mut layer = CliffordLayer::identity(pauli.num_qubits());
    for &q in qubits {
        if let Some(axis) = pauli.letter(q).axis() {
            layer.set_gate(q, SingleQubitClifford::mapping(axis, to));
        }
    }
    layer
}

fn root_term(tree: &DerivationTree) -> &Term {
    tree.single_term().expect("synthesis trees have single-term roots")
}

/// Shrinks an odd-weight `source` term onto an odd subset of its support.
///
/// The source is first rotated to `+X` on its support. Each level then takes
/// the two lowest qubits `a, b` not in the target and the rest `R`:
/// `i[X^{S}, X_a X_b Y^{R}] ∝ Z^{R}`, rotated back to `+X^{R}`. The result is a
/// positive multiple of `X` on `target_support`.
pub fn reduce_odd_support(source: &Term, target_support: &Support) -> Result<DerivationTree, SynthesisError> {
    let support = source.support();
    if support.len() % 2 == 0 {
        return Err(SynthesisError::EvenSource);
    }
    if target_support.len() % 2 == 0 || !target_support.is_subset(&support) {
        return Err(SynthesisError::BadSupport);
    }
    let to_x = axis_layer(source.pauli(), support.qubits(), Axis::X);
    let mut tree = DerivationTree::conjugate(DerivationTree::given(source.clone()), to_x)?.sign_fixed()?;

    loop {
        let current = root_term(&tree).support();
        let outside = current.difference(target_support);
        if outside.is_empty() {
            return Ok(tree);
        }
        let (a, b) = (outside.qubits()[0], outside.qubits()[1]);
        let rest = current.difference(&Support::new(vec![a, b]));
        let to_y = axis_layer(root_term(&tree).pauli(), rest.qubits(), Axis::Y);
        let partner = DerivationTree::conjugate(tree.clone(), to_y)?;
        let reduced = DerivationTree::commutator(tree, partner)?;
        let back = axis_layer(root_term(&reduced).pauli(), rest.qubits(), Axis::X);
        tree = DerivationTree::conjugate(reduced, back)?.sign_fixed()?;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingSource {
    /// The term itself.
    Original { term_index: usize },
    /// The term shrunk onto a subset of its support.
    Reduced { term_index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coupling {
    pub support: Vec<usize>,
    pub source: CouplingSource,
}

impl Coupling {
    pub fn support(&self) -> Support {
        Support::new(self.support.clone())
    }

    pub fn term_index(&self) -> usize {
        match self.source {
            CouplingSource::Original { term_index } | CouplingSource::Reduced { term_index } => term_index,
        }
    }

    /// Leaf tree realizing this coupling from `h`.
    pub fn derive(&self, h: &Hamiltonian) -> Result<DerivationTree, SynthesisError> {
        let term = &h.terms()[self.term_index()];
        match self.source {
            CouplingSource::Original { .. } => Ok(DerivationTree::given(term.clone())),
            CouplingSource::Reduced { .. } => reduce_odd_support(term, &self.support()),
        }
    }
}

/// Odd couplings that connect every qubit, one of which (the isolated
/// qubit) is touched by exactly one coupling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatingSet {
    pub num_qubits: usize,
    pub couplings: Vec<Coupling>,
    pub isolated_qubit: usize,
}

impl IsolatingSet {
    /// Direct check of the defining properties.
    pub fn check(&self) -> Result<(), String> {
        let n = self.num_qubits;
        let mut uf = UnionFind::new(n);
        let mut covered = vec![false; n];
        for c in &self.couplings {
            if c.support.len() % 2 == 0 {
                return Err(format!("coupling {} has even size", c.support()));
            }
            for &q in &c.support {
                covered[q] = true;
                uf.union(c.support[0], q);
            }
        }
        if let Some(q) = covered.iter().position(|&c| !c) {
            return Err(format!("qubit {} is not covered", q + 1));
        }
        if uf.groups().len() != 1 {
            return Err("couplings are not connected".into());
        }
        let touching = self
            .couplings
            .iter()
            .filter(|c| c.support.contains(&self.isolated_qubit))
            .count();
        if touching != 1 {
            return Err(format!(
                "isolated qubit {} lies in {touching} couplings",
                self.isolated_qubit + 1
            ));
        }
        Ok(())
    }
}

impl fmt::Display for IsolatingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.couplings.iter().map(|c| c.support().to_string()).collect();
        write!(f, "[{}] isolated qubit {}", parts.join(", "), self.isolated_qubit + 1)
    }
}

fn require_odd_entangling(h: &Hamiltonian) -> Result<(), SynthesisError> {
    match h.classify() {
        Classification::OddEntangling { .. } => Ok(()),
        Classification::NotEntangling { .. } => Err(SynthesisError::NotEntangling),
        other => Err(SynthesisError::NotOddEntangling(other.name().to_string())),
    }
}

/// Walk that builds an isolating set.
///
/// Starts from the lowest-index coupling term. Each step takes the
/// lowest-index term that meets the previous coupling and reaches uncovered
/// qubits, keeping its new qubits plus one or two overlap qubits so the size
/// stays odd. The isolated qubit is the highest new qubit of the last step.
/// Remaining qubits are then joined with original terms that avoid it.
pub fn find_isolating_set(h: &Hamiltonian) -> Result<IsolatingSet, SynthesisError> {
    require_odd_entangling(h)?;
    let n = h.num_qubits();
    let supports: Vec<(usize, Support)> = h
        .terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.weight() > 1)
        .map(|(i, t)| (i, t.support()))
        .collect();
    let (first, s1) = supports.first().cloned().ok_or(SynthesisError::NotEntangling)?;

    let mut couplings = vec![Coupling {
        support: s1.qubits().to_vec(),
        source: CouplingSource::Original { term_index: first },
    }];
    let mut covered = s1.clone();
    let mut prev = s1.clone();
    let mut isolated = *s1.qubits().last().expect("nonempty support");

    while covered.len() < n {
        let next = supports
            .iter()
            .find(|(_, s)| !s.intersection(&prev).is_empty() && !s.difference(&covered).is_empty());
        let Some((index, s)) = next else { break };
        let new = s.difference(&covered);
        let want = if new.len() % 2 == 0 { 1 } else { 2 };
        let mut overlap: Vec<usize> = s.intersection(&prev).qubits().to_vec();
        for &q in s.intersection(&covered).qubits() {
            if !overlap.contains(&q) {
                overlap.push(q);
            }
        }
        overlap.truncate(want);
        let support = new.union(&Support::new(overlap));
        let source = if support == *s {
            CouplingSource::Original { term_index: *index }
        } else {
            CouplingSource::Reduced { term_index: *index }
        };
        isolated = *new.qubits().last().expect("step adds qubits");
        covered = covered.union(&support);
        prev = support.clone();
        couplings.push(Coupling {
            support: support.qubits().to_vec(),
            source,
        });
    }

    while covered.len() < n {
        let next = supports.iter().find(|(_, s)| {
            !s.contains(isolated) && !s.intersection(&covered).is_empty() && !s.difference(&covered).is_empty()
        });
        let Some((index, s)) = next else {
            unreachable!("entangling Hamiltonian leaves qubits unreachable");
        };
        covered = covered.union(s);
        couplings.push(Coupling {
            support: s.qubits().to_vec(),
            source: CouplingSource::Original { term_index: *index },
        });
    }

    let set = IsolatingSet {
        num_qubits: n,
        couplings,
        isolated_qubit: isolated,
    };
    debug_assert_eq!(set.check(), Ok(()));
    Ok(set)
}

fn check_target(h: &Hamiltonian, target: &PhasedPauli) -> Result<(), SynthesisError> {
    if target.num_qubits() != h.num_qubits() {
        return Err(SynthesisError::TargetSize {
            expected: h.num_qubits(),
            found: target.num_qubits(),
        });
    }
    if target.is_identity() {
        return Err(SynthesisError::IdentityTarget);
    }
    Ok(())
}

/// Leaf for `target` when it is already a term or a local string.
fn direct_leaf(h: &Hamiltonian, target: &PhasedPauli) -> Option<DerivationTree> {
    if let Some(i) = h.term_index(target) {
        return Some(DerivationTree::given(h.terms()[i].clone()));
    }
    (target.weight() == 1).then(|| DerivationTree::local(target.clone()))
}

/// Positive multiple of an odd `target` from an odd entangling `h`.
///
/// Generators are the isolating-set couplings plus all local strings; the
/// tree comes from the closure's provenance and is then sign-fixed.
pub fn derive_odd_target(h: &Hamiltonian, target: &PhasedPauli) -> Result<DerivationTree, SynthesisError> {
    check_target(h, target)?;
    let target = target.unsigned();
    if !target.is_odd() {
        return Err(SynthesisError::EvenTarget(target.to_string()));
    }
    require_odd_entangling(h)?;
    let tree = match direct_leaf(h, &target) {
        Some(leaf) => leaf,
        None => {
            let set = find_isolating_set(h)?;
            let mut leaves = set
                .couplings
                .iter()
                .map(|c| c.derive(h))
                .collect::<Result<Vec<_>, _>>()?;
            leaves.extend(local_leaves(h.num_qubits()));
            let closure = close_generators(h.num_qubits(), leaves)?;
            closure.extract_derivation(&target).map_err(|e| match e {
                DerivationError::NotInClosure(s) => SynthesisError::Unreachable(s),
                e => e.into(),
            })?
        }
    };
    let tree = tree.sign_fixed()?;
    assert!(
        tree.nodes()
            .iter()
            .all(|t| t.effective().terms().iter().all(|term| term.pauli().is_odd())),
        "odd derivation produced an even-weight intermediate"
    );
    Ok(tree)
}

/// Generic route for any `h`: closure over terms and locals, then provenance.
pub fn derive_target(h: &Hamiltonian, target: &PhasedPauli) -> Result<DerivationTree, SynthesisError> {
    check_target(h, target)?;
    let target = target.unsigned();
    let tree = match direct_leaf(h, &target) {
        Some(leaf) => leaf,
        None => close(h, true).extract_derivation(&target).map_err(|e| match e {
            DerivationError::NotInClosure(s) => SynthesisError::Unreachable(s),
            e => e.into(),
        })?,
    };
    Ok(tree.sign_fixed()?)
}

/// Initial state of the ancilla in an encoded derivation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AncillaState {
    #[serde(rename = "|0>")]
    Zero,
}

impl fmt::Display for AncillaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AncillaState::Zero => f.write_str("|0>"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodedDerivation {
    pub tree: DerivationTree,
    /// The `n`-qubit string actually simulated.
    pub extended_target: PhasedPauli,
    pub ancilla: usize,
    pub ancilla_state: AncillaState,
}

fn ancilla_letter_ok(term: &Term, ancilla: usize) -> bool {
    matches!(term.pauli().letter(ancilla), Letter::I | Letter::Z)
}

/// Whether every node acts on `ancilla` by `I` or `Z` only. A term leaf
/// rotated onto `Z` by a conjugation directly above it is allowed.
pub fn ancilla_is_stationary(tree: &DerivationTree, ancilla: usize) -> bool {
    let ok = |t: &DerivationTree| t.effective().terms().iter().all(|term| ancilla_letter_ok(term, ancilla));
    if !ok(tree) {
        return false;
    }
    match tree.node() {
        Node::Conjugate { child, .. } if matches!(child.node(), Node::Given(_)) => true,
        _ => tree.children().into_iter().all(|c| ancilla_is_stationary(c, ancilla)),
    }
}

/// Encoded simulation of an arbitrary `target` on qubits `1..n−1`, with
/// qubit `n` as an ancilla held in `|0⟩`.
///
/// Odd targets are extended by `I`, even ones by `Z`. Generators are the
/// terms of `h` rotated to `I`/`Z` on the ancilla, plus every local string
/// except `X` and `Y` on the ancilla; strings with `I`/`Z` on one qubit form
/// a closed subalgebra, so every node preserves `|0⟩`.
pub fn derive_encoded(h: &Hamiltonian, target: &PhasedPauli) -> Result<EncodedDerivation, SynthesisError> {
    require_odd_entangling(h)?;
    let n = h.num_qubits();
    if target.num_qubits() + 1 != n {
        return Err(SynthesisError::TargetSize {
            expected: n - 1,
            found: target.num_qubits(),
        });
    }
    if target.is_identity() {
        return Err(SynthesisError::IdentityTarget);
    }
    let ancilla = n - 1;
    let mut extended = PhasedPauli::identity(n);
    for (q, l) in target.letters().enumerate() {
        extended.set_letter(q, l);
    }
    if !target.is_odd() {
        extended.set_letter(ancilla, Letter::Z);
    }

    let tree = match direct_leaf(h, &extended) {
        Some(leaf) => leaf,
        None => {
            let mut leaves = Vec::new();
            for t in h.terms() {
                let leaf = DerivationTree::given(t.clone());
                leaves.push(match t.pauli().letter(ancilla).axis() {
                    Some(axis) if axis != Axis::Z => DerivationTree::conjugate(
                        leaf,
                        CliffordLayer::single(n, ancilla, SingleQubitClifford::mapping(axis, Axis::Z)),
                    )?,
                    _ => leaf,
                });
            }
            leaves.extend(local_leaves(n).filter(|l| {
                let p = root_term(l).pauli();
                matches!(p.letter(ancilla), Letter::I | Letter::Z)
            }));
            let closure = close_generators(n, leaves)?;
            closure.extract_derivation(&extended).map_err(|e| match e {
                DerivationError::NotInClosure(_) => SynthesisError::AncillaNotIsolated {
                    target: target.to_string(),
                    ancilla: ancilla + 1,
                },
                e => e.into(),
            })?
        }
    };
    let tree = tree.sign_fixed()?;
    assert!(ancilla_is_stationary(&tree, ancilla), "encoded tree moves the ancilla");
    Ok(EncodedDerivation {
        tree,
        extended_target: extended,
        ancilla,
        ancilla_state: AncillaState::Zero,
    })
}
