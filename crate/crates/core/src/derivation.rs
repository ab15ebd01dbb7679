//! Proof-carrying recipes for simulating a target Hamiltonian.
//!
//! Every node caches its effective Hamiltonian, computed from its children at
//! construction time. [`DerivationTree::replay`] recomputes the whole tree
//! bottom-up and checks every cached value.

use serde::{Deserialize, Serialize};

use crate::error::DerivationError;
use crate::hamiltonian::{Hamiltonian, Term};
use crate::isolation::{apply_schedule_symbolic, Schedule, ScheduleRecord};
use crate::pauli::{CliffordLayer, Letter, PhasedPauli, SingleQubitClifford};

/// Tolerance for cached-vs-recomputed coefficients.
pub const REPLAY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// A term of the given Hamiltonian, evolvable directly.
    Given(Term),
    /// A weight-1 Pauli with unit coefficient; always free.
    LocalPauli(PhasedPauli),
    /// `L H L†`.
    Conjugate {
        child: Box<DerivationTree>,
        layer: CliffordLayer,
    },
    /// `i[A, B]`.
    Commutator {
        left: Box<DerivationTree>,
        right: Box<DerivationTree>,
    },
    /// `Σ w_i H_i`.
    Combine { parts: Vec<(f64, DerivationTree)> },
    /// `f · H`, `f > 0`.
    Rescale {
        child: Box<DerivationTree>,
        factor: f64,
    },
    /// A conjugate-and-add schedule applied to a full Hamiltonian.
    Isolate { source: Hamiltonian, schedule: Schedule },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTree {
    node: Node,
    effective: Hamiltonian,
}

fn leaf_effective(node: &Node) -> Result<Hamiltonian, DerivationError> {
    Ok(match node {
        Node::Given(t) => Hamiltonian::from_term(t.clone()),
        Node::LocalPauli(p) => {
            Hamiltonian::from_term(Term::new(1.0, p.unsigned()).expect("unsigned is Hermitian"))
        }
        Node::Conjugate { child, layer } => child.effective.conjugate(layer)?,
        Node::Commutator { left, right } => {
            let c = left.effective.commutator(&right.effective)?;
            if c.is_empty() {
                return Err(DerivationError::VanishingCommutator {
                    left: left.effective.to_string(),
                    right: right.effective.to_string(),
                });
            }
            c
        }
        Node::Combine { parts } => {
            let first = parts.first().ok_or(DerivationError::EmptyCombine)?;
            let mut acc = Hamiltonian::zero(first.1.num_qubits());
            for (w, child) in parts {
                acc = acc.add(&child.effective.scaled(*w))?;
            }
            acc
        }
        Node::Rescale { child, factor } => child.effective.scaled(*factor),
        Node::Isolate { source, schedule } => apply_schedule_symbolic(source, schedule)?,
    })
}

impl DerivationTree {
    fn build(node: Node) -> Result<DerivationTree, DerivationError> {
        let effective = leaf_effective(&node)?;
        Ok(DerivationTree { node, effective })
    }

    pub fn given(term: Term) -> DerivationTree {
        DerivationTree::build(Node::Given(term)).expect("leaves always build")
    }

    /// Unit-coefficient weight-1 Pauli. Panics if `pauli` is not weight 1.
    pub fn local(pauli: PhasedPauli) -> DerivationTree {
        assert_eq!(pauli.weight(), 1, "local Paulis act on one qubit");
        DerivationTree::build(Node::LocalPauli(pauli.unsigned())).expect("leaves always build")
    }

    pub fn conjugate(child: DerivationTree, layer: CliffordLayer) -> Result<DerivationTree, DerivationError> {
        DerivationTree::build(Node::Conjugate {
            child: Box::new(child),
            layer,
        })
    }

    pub fn commutator(left: DerivationTree, right: DerivationTree) -> Result<DerivationTree, DerivationError> {
        DerivationTree::build(Node::Commutator {
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn combine(parts: Vec<(f64, DerivationTree)>) -> Result<DerivationTree, DerivationError> {
        DerivationTree::build(Node::Combine { parts })
    }

    pub fn rescale(child: DerivationTree, factor: f64) -> Result<DerivationTree, DerivationError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(DerivationError::NonPositiveFactor(factor));
        }
        DerivationTree::build(Node::Rescale {
            child: Box::new(child),
            factor,
        })
    }

    pub fn isolate(source: Hamiltonian, schedule: Schedule) -> Result<DerivationTree, DerivationError> {
        DerivationTree::build(Node::Isolate { source, schedule })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn effective(&self) -> &Hamiltonian {
        &self.effective
    }

    pub fn num_qubits(&self) -> usize {
        self.effective.num_qubits()
    }

    pub fn kind(&self) -> &'static str {
        match self.node {
            Node::Given(_) => "given",
            Node::LocalPauli(_) => "local_pauli",
            Node::Conjugate { .. } => "conjugate",
            Node::Commutator { .. } => "commutator",
            Node::Combine { .. } => "combine",
            Node::Rescale { .. } => "rescale",
            Node::Isolate { .. } => "isolate",
        }
    }

    pub fn children(&self) -> Vec<&DerivationTree> {
        match &self.node {
            Node::Given(_) | Node::LocalPauli(_) | Node::Isolate { .. } => Vec::new(),
            Node::Conjugate { child, .. } | Node::Rescale { child, .. } => vec![child],
            Node::Commutator { left, right } => vec![left, right],
            Node::Combine { parts } => parts.iter().map(|(_, c)| c).collect(),
        }
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&DerivationTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.children().into_iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.nodes().len()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn commutator_count(&self) -> usize {
        self.nodes()
            .iter()
            .filter(|t| matches!(t.node, Node::Commutator { .. }))
            .count()
    }

    /// The root's single term, if the effective Hamiltonian is one term.
    pub fn single_term(&self) -> Option<&Term> {
        self.effective.as_single_term()
    }

    /// Recomputes every node bottom-up and compares against the caches.
    pub fn replay(&self) -> Result<Hamiltonian, DerivationError> {
        for child in self.children() {
            child.replay()?;
        }
        let recomputed = leaf_effective(&self.node)?;
        if !recomputed.approx_eq(&self.effective, REPLAY_TOLERANCE) {
            return Err(DerivationError::ReplayMismatch {
                node: self.kind(),
                cached: self.effective.to_string(),
                recomputed: recomputed.to_string(),
            });
        }
        Ok(recomputed)
    }

    /// Wraps a single-term root with a negative coefficient in a conjugation
    /// by a single-qubit Pauli that anticommutes with it.
    pub fn sign_fixed(self) -> Result<DerivationTree, DerivationError> {
        let Some(term) = self.single_term() else {
            return Ok(self);
        };
        if term.coefficient() > 0.0 {
            return Ok(self);
        }
        let n = self.num_qubits();
        let q = term.support().qubits()[0];
        let flip = if term.pauli().letter(q) == Letter::X {
            Letter::Z
        } else {
            Letter::X
        };
        let layer = CliffordLayer::single(n, q, SingleQubitClifford::pauli(flip));
        DerivationTree::conjugate(self, layer)
    }

    pub fn to_record(&self) -> TreeRecord {
        let node = match &self.node {
            Node::Given(t) => NodeRecord::Given { term: TermRecord::from(t) },
            Node::LocalPauli(p) => NodeRecord::LocalPauli { pauli: p.to_string() },
            Node::Conjugate { child, layer } => NodeRecord::Conjugate {
                layer: layer.gates().iter().map(|g| g.to_string()).collect(),
                child: Box::new(child.to_record()),
            },
            Node::Commutator { left, right } => NodeRecord::Commutator {
                children: vec![left.to_record(), right.to_record()],
            },
            Node::Combine { parts } => NodeRecord::Combine {
                weights: parts.iter().map(|(w, _)| *w).collect(),
                children: parts.iter().map(|(_, c)| c.to_record()).collect(),
            },
            Node::Rescale { child, factor } => NodeRecord::Rescale {
                factor: *factor,
                child: Box::new(child.to_record()),
            },
            Node::Isolate { source, schedule } => NodeRecord::Isolate {
                source: source.terms().iter().map(TermRecord::from).collect(),
                schedule: schedule.to_record(),
            },
        };
        TreeRecord {
            num_qubits: self.num_qubits(),
            effective: self.effective.terms().iter().map(TermRecord::from).collect(),
            node,
        }
    }

    /// Rebuilds a tree from its record, recomputing every node; the recorded
    /// effective Hamiltonians must match.
    pub fn from_record(record: &TreeRecord) -> Result<DerivationTree, DerivationError> {
        let n = record.num_qubits;
        let malformed = |msg: &str| DerivationError::Malformed(msg.to_string());
        let tree = match &record.node {
            NodeRecord::Given { term } => DerivationTree::given(term.to_term()?),
            NodeRecord::LocalPauli { pauli } => {
                let p: PhasedPauli = pauli.parse()?;
                if p.weight() != 1 {
                    return Err(malformed("local_pauli must have weight 1"));
                }
                DerivationTree::local(p)
            }
            NodeRecord::Conjugate { layer, child } => {
                let gates = layer
                    .iter()
                    .map(|g| g.parse::<SingleQubitClifford>())
                    .collect::<Result<Vec<_>, _>>()?;
                DerivationTree::conjugate(
                    DerivationTree::from_record(child)?,
                    CliffordLayer::new(gates),
                )?
            }
            NodeRecord::Commutator { children } => match children.as_slice() {
                [l, r] => DerivationTree::commutator(
                    DerivationTree::from_record(l)?,
                    DerivationTree::from_record(r)?,
                )?,
                _ => return Err(malformed("commutator needs exactly two children")),
            },
            NodeRecord::Combine { weights, children } => {
                if weights.len() != children.len() {
                    return Err(malformed("combine weights and children differ in length"));
                }
                let parts = weights
                    .iter()
                    .zip(children)
                    .map(|(w, c)| Ok((*w, DerivationTree::from_record(c)?)))
                    .collect::<Result<Vec<_>, DerivationError>>()?;
                DerivationTree::combine(parts)?
            }
            NodeRecord::Rescale { factor, child } => {
                DerivationTree::rescale(DerivationTree::from_record(child)?, *factor)?
            }
            NodeRecord::Isolate { source, schedule } => {
                let terms = source
                    .iter()
                    .map(TermRecord::to_term)
                    .collect::<Result<Vec<_>, _>>()?;
                let source = Hamiltonian::new(n, terms)?;
                let schedule = Schedule::from_record(schedule)?;
                DerivationTree::isolate(source, schedule)?
            }
        };
        if tree.num_qubits() != n {
            return Err(malformed("qubit count disagrees with children"));
        }
        let recorded = Hamiltonian::new(
            n,
            record
                .effective
                .iter()
                .map(TermRecord::to_term)
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        if !recorded.approx_eq(&tree.effective, REPLAY_TOLERANCE) {
            return Err(DerivationError::ReplayMismatch {
                node: tree.kind(),
                cached: recorded.to_string(),
                recomputed: tree.effective.to_string(),
            });
        }
        Ok(tree)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("records serialize")
    }

    pub fn from_json(text: &str) -> Result<DerivationTree, DerivationError> {
        let record: TreeRecord =
            serde_json::from_str(text).map_err(|e| DerivationError::Malformed(e.to_string()))?;
        DerivationTree::from_record(&record)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coefficient: f64,
    pub pauli: String,
}

impl From<&Term> for TermRecord {
    fn from(t: &Term) -> Self {
        TermRecord {
            coefficient: t.coefficient(),
            pauli: t.pauli().to_string(),
        }
    }
}

impl TermRecord {
    fn to_term(&self) -> Result<Term, DerivationError> {
        Ok(Term::new(self.coefficient, self.pauli.parse()?)?)
    }
}

/// JSON form of a tree node: its type, cached effective terms and children.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub num_qubits: usize,
    pub effective: Vec<TermRecord>,
    #[serde(flatten)]
    pub node: NodeRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeRecord {
    Given {
        term: TermRecord,
    },
    LocalPauli {
        pauli: String,
    },
    Conjugate {
        layer: Vec<String>,
        child: Box<TreeRecord>,
    },
    Commutator {
        children: Vec<TreeRecord>,
    },
    Combine {
        weights: Vec<f64>,
        children: Vec<TreeRecord>,
    },
    Rescale {
        factor: f64,
        child: Box<TreeRecord>,
    },
    Isolate {
        source: Vec<TermRecord>,
        schedule: ScheduleRecord,
    },
}
