//! Commutator closure of a set of Pauli generators, with provenance.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::derivation::DerivationTree;
use crate::error::DerivationError;
use crate::hamiltonian::{Algebra, Hamiltonian, Term};
use crate::pauli::{Letter, PhasedPauli};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Universal,
    Odd,
}

/// `4^n − 1` (universal) or `(4^n − (−2)^n)/2` (odd-weight strings).
/// `None` on `u128` overflow.
pub fn algebra_dimension(num_qubits: usize, kind: AlgebraKind) -> Option<u128> {
    let n = u32::try_from(num_qubits).ok()?;
    let four_n = 4u128.checked_pow(n)?;
    match kind {
        AlgebraKind::Universal => Some(four_n - 1),
        AlgebraKind::Odd => {
            let two_n = 2u128.pow(n);
            let v = if n % 2 == 0 { four_n - two_n } else { four_n + two_n };
            Some(v / 2)
        }
    }
}

/// What the closure turned out to be.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "algebra", rename_all = "snake_case")]
pub enum ClosureAlgebra {
    /// All `4^n − 1` strings: `su(2^n)`.
    Universal,
    /// Exactly the odd-weight strings.
    Odd(Algebra),
    Other,
}

impl fmt::Display for ClosureAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureAlgebra::Universal => f.write_str("su"),
            ClosureAlgebra::Odd(a) => write!(f, "{a}"),
            ClosureAlgebra::Other => f.write_str("other"),
        }
    }
}

/// Commutator-closed set of unsigned Pauli strings.
///
/// Elements are stored in discovery order: generators first (sorted), then
/// each breadth-first level sorted lexicographically.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    num_qubits: usize,
    elements: Vec<PhasedPauli>,
    index: HashMap<PhasedPauli, usize>,
    parents: Vec<Option<(usize, usize)>>,
    leaves: Vec<Option<DerivationTree>>,
    levels: Vec<usize>,
}

/// Closure of `h`'s term strings, plus all `3n` weight-1 strings when
/// `include_locals` is set. A term that is itself weight 1 keeps its
/// `Given` leaf.
pub fn close(h: &Hamiltonian, include_locals: bool) -> ClosureResult {
    let n = h.num_qubits();
    let mut leaves: Vec<DerivationTree> = h.terms().iter().cloned().map(DerivationTree::given).collect();
    if include_locals {
        leaves.extend(local_leaves(n));
    }
    close_generators(n, leaves).expect("term and local leaves are single terms")
}

/// The `3n` weight-1 strings as `LocalPauli` leaves.
pub fn local_leaves(num_qubits: usize) -> impl Iterator<Item = DerivationTree> {
    (0..num_qubits).flat_map(move |q| {
        Letter::NON_IDENTITY
            .into_iter()
            .map(move |l| DerivationTree::local(PhasedPauli::single(num_qubits, q, l)))
    })
}

/// Closure of arbitrary single-term generator trees. When two leaves share a
/// string, the first one is kept.
pub fn close_generators(
    num_qubits: usize,
    leaves: impl IntoIterator<Item = DerivationTree>,
) -> Result<ClosureResult, DerivationError> {
    let mut generators: BTreeMap<PhasedPauli, DerivationTree> = BTreeMap::new();
    for leaf in leaves {
        let term = leaf
            .single_term()
            .ok_or_else(|| DerivationError::NotSingleTerm(leaf.effective().to_string()))?;
        if term.num_qubits() != num_qubits {
            return Err(DerivationError::Pauli(crate::error::PauliError::QubitMismatch {
                left: num_qubits,
                right: term.num_qubits(),
            }));
        }
        let key = term.pauli().unsigned();
        generators.entry(key).or_insert(leaf);
    }

    let mut result = ClosureResult {
        num_qubits,
        elements: Vec::with_capacity(generators.len()),
        index: HashMap::new(),
        parents: Vec::new(),
        leaves: Vec::new(),
        levels: Vec::new(),
    };
    for (p, leaf) in generators {
        result.push(p, None, Some(leaf));
    }
    result.levels.push(result.elements.len());

    let mut start = 0;
    while start < result.elements.len() {
        let end = result.elements.len();
        let mut found: BTreeMap<PhasedPauli, (usize, usize)> = BTreeMap::new();
        for i in start..end {
            for j in 0..i {
                let (a, b) = (&result.elements[j], &result.elements[i]);
                if !a.symplectic_product(b).expect("same size") {
                    continue;
                }
                let c = a.mul(b).expect("same size").unsigned();
                if !result.index.contains_key(&c) {
                    found.entry(c).or_insert((j, i));
                }
            }
        }
        start = end;
        for (p, parents) in found {
            result.push(p, Some(parents), None);
        }
        if result.elements.len() > end {
            result.levels.push(result.elements.len());
        }
    }

    if result.generators_all_odd() {
        assert!(
            result.elements.iter().all(PhasedPauli::is_odd),
            "odd generators produced an even-weight string"
        );
    }
    log::debug!(
        "closure on {} qubits: {} elements in {} levels",
        num_qubits,
        result.elements.len(),
        result.levels.len()
    );
    Ok(result)
}

impl ClosureResult {
    fn push(&mut self, p: PhasedPauli, parents: Option<(usize, usize)>, leaf: Option<DerivationTree>) {
        self.index.insert(p.clone(), self.elements.len());
        self.elements.push(p);
        self.parents.push(parents);
        self.leaves.push(leaf);
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[PhasedPauli] {
        &self.elements
    }

    /// Elements sorted lexicographically.
    pub fn sorted_elements(&self) -> Vec<PhasedPauli> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    pub fn contains(&self, p: &PhasedPauli) -> bool {
        self.index.contains_key(&p.unsigned())
    }

    pub fn position(&self, p: &PhasedPauli) -> Option<usize> {
        self.index.get(&p.unsigned()).copied()
    }

    pub fn is_generator(&self, index: usize) -> bool {
        self.parents[index].is_none()
    }

    pub fn generator_count(&self) -> usize {
        self.parents.iter().filter(|p| p.is_none()).count()
    }

    /// Indices of the two earlier elements whose commutator first produced
    /// element `index`; `None` for generators.
    pub fn parents(&self, index: usize) -> Option<(usize, usize)> {
        self.parents[index]
    }

    /// Cumulative element counts after each breadth-first level.
    pub fn level_sizes(&self) -> &[usize] {
        &self.levels
    }

    /// `hist[w]` = number of elements of weight `w`.
    pub fn weight_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.num_qubits + 1];
        for p in &self.elements {
            hist[p.weight()] += 1;
        }
        hist
    }

    fn generators_all_odd(&self) -> bool {
        self.elements
            .iter()
            .zip(&self.parents)
            .filter(|(_, par)| par.is_none())
            .all(|(p, _)| p.is_odd())
    }

    pub fn all_odd(&self) -> bool {
        self.elements.iter().all(PhasedPauli::is_odd)
    }

    pub fn algebra(&self) -> ClosureAlgebra {
        let n = self.num_qubits;
        let dim = self.elements.len() as u128;
        if algebra_dimension(n, AlgebraKind::Universal) == Some(dim) {
            ClosureAlgebra::Universal
        } else if self.all_odd() && algebra_dimension(n, AlgebraKind::Odd) == Some(dim) {
            ClosureAlgebra::Odd(Algebra::for_qubits(n))
        } else {
            ClosureAlgebra::Other
        }
    }

    /// Commutator tree reproducing `target`'s string up to a nonzero real
    /// scale. Leaves are the generator trees.
    pub fn extract_derivation(&self, target: &PhasedPauli) -> Result<DerivationTree, DerivationError> {
        let idx = self
            .position(target)
            .ok_or_else(|| DerivationError::NotInClosure(target.to_string()))?;
        let mut memo: HashMap<usize, DerivationTree> = HashMap::new();
        self.extract_index(idx, &mut memo)
    }

    fn extract_index(
        &self,
        idx: usize,
        memo: &mut HashMap<usize, DerivationTree>,
    ) -> Result<DerivationTree, DerivationError> {
        if let Some(t) = memo.get(&idx) {
            return Ok(t.clone());
        }
        let tree = match self.parents[idx] {
            None => self.leaves[idx].clone().expect("generators carry leaves"),
            Some((a, b)) => {
                let left = self.extract_index(a, memo)?;
                let right = self.extract_index(b, memo)?;
                DerivationTree::commutator(left, right)?
            }
        };
        memo.insert(idx, tree.clone());
        Ok(tree)
    }

    /// Generator leaf for element `index`, if it is a generator.
    pub fn leaf(&self, index: usize) -> Option<&DerivationTree> {
        self.leaves[index].as_ref()
    }

    /// The element's string as a unit term.
    pub fn term(&self, index: usize) -> Term {
        Term::new(1.0, self.elements[index].clone()).expect("stored strings are unsigned")
    }
}

/// All non-identity strings on `n` qubits, lexicographic.
pub fn all_strings(num_qubits: usize) -> impl Iterator<Item = PhasedPauli> {
    let total = 4usize.pow(num_qubits as u32);
    (1..total).map(move |mut code| {
        let mut p = PhasedPauli::identity(num_qubits);
        for q in (0..num_qubits).rev() {
            p.set_letter(q, Letter::ALL[code % 4]);
            code /= 4;
        }
        p
    })
}
