//! Real-weighted sums of Pauli products, their text format, coupling
//! structure and the universality classifier.
//!
//! File format (UTF-8): an optional `qubits: <n>` header, then one term per
//! line as `<decimal coefficient> <pauli string>`. `#` starts a comment and
//! blank lines are ignored. Without a header the qubit count is fixed by the
//! first term.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::closure::{algebra_dimension, AlgebraKind};
use crate::error::{ParseError, ParseErrorKind, PauliError};
use crate::pauli::{commutator, CliffordLayer, Letter, PhasedPauli};
use crate::union_find::UnionFind;

/// Coefficients below this magnitude are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// A single real-weighted Pauli product `c · σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    coefficient: f64,
    pauli: PhasedPauli,
}

impl Term {
    /// Folds a `±1` phase of `pauli` into the coefficient; `±i` is rejected.
    pub fn new(coefficient: f64, pauli: PhasedPauli) -> Result<Term, PauliError> {
        if !pauli.is_hermitian() {
            return Err(PauliError::NotHermitian(pauli.to_phased_string()));
        }
        let sign = if pauli.phase_exp() == 2 { -1.0 } else { 1.0 };
        Ok(Term {
            coefficient: sign * coefficient,
            pauli: pauli.with_phase(0),
        })
    }

    pub(crate) fn from_parts(coefficient: f64, pauli: PhasedPauli) -> Term {
        debug_assert_eq!(pauli.phase_exp(), 0);
        Term { coefficient, pauli }
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// The bare Pauli string (phase 0).
    pub fn pauli(&self) -> &PhasedPauli {
        &self.pauli
    }

    pub fn weight(&self) -> usize {
        self.pauli.weight()
    }

    pub fn support(&self) -> Support {
        self.pauli.support()
    }

    pub fn num_qubits(&self) -> usize {
        self.pauli.num_qubits()
    }

    pub fn scaled(&self, factor: f64) -> Term {
        Term::from_parts(self.coefficient * factor, self.pauli.clone())
    }

    pub fn conjugate(&self, layer: &CliffordLayer) -> Result<Term, PauliError> {
        Term::new(self.coefficient, self.pauli.conjugate(layer)?)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}", self.coefficient, self.pauli)
    }
}

/// Sorted set of qubit indices a term acts on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new(mut qubits: Vec<usize>) -> Support {
        qubits.sort_unstable();
        qubits.dedup();
        Support(qubits)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.0.binary_search(&qubit).is_ok()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0.iter().all(|&q| other.contains(q))
    }

    pub fn intersection(&self, other: &Support) -> Support {
        Support(self.0.iter().copied().filter(|&q| other.contains(q)).collect())
    }

    pub fn union(&self, other: &Support) -> Support {
        Support::new(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &Support) -> Support {
        Support(self.0.iter().copied().filter(|&q| !other.contains(q)).collect())
    }

    /// All `3^|S|` Pauli strings acting non-trivially exactly on this support,
    /// in lexicographic order.
    pub fn coupling_set(
        &self,
        num_qubits: usize,
    ) -> Result<impl Iterator<Item = PhasedPauli> + '_, PauliError> {
        if let Some(&q) = self.0.iter().find(|&&q| q >= num_qubits) {
            return Err(PauliError::QubitOutOfRange { qubit: q, num_qubits });
        }
        let k = self.0.len() as u32;
        let count = 3usize.pow(k);
        Ok((0..count).map(move |mut index| {
            let mut p = PhasedPauli::identity(num_qubits);
            for &q in self.0.iter().rev() {
                p.set_letter(q, Letter::NON_IDENTITY[index % 3]);
                index /= 3;
            }
            p
        }))
    }
}

impl fmt::Display for Support {
    /// 1-based, e.g. `{1,3,4}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|q| (q + 1).to_string()).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

/// Which simple algebra an odd entangling Hamiltonian generates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    So,
    Sp,
}

impl Algebra {
    pub fn for_qubits(num_qubits: usize) -> Algebra {
        if num_qubits % 2 == 0 {
            Algebra::So
        } else {
            Algebra::Sp
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::So => "so",
            Algebra::Sp => "sp",
        })
    }
}

/// Dynamic-universality class under free local unitaries.
///
/// Dimensions are `None` when they overflow `u128` (64 or more qubits).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum Classification {
    NotEntangling {
        components: Vec<Vec<usize>>,
    },
    OddEntangling {
        algebra: Algebra,
        dimension: Option<u128>,
    },
    Universal {
        dimension: Option<u128>,
    },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::NotEntangling { .. } => "NotEntangling",
            Classification::OddEntangling { .. } => "OddEntangling",
            Classification::Universal { .. } => "Universal",
        }
    }

    pub fn is_universal(&self) -> bool {
        matches!(self, Classification::Universal { .. })
    }

    pub fn is_odd_entangling(&self) -> bool {
        matches!(self, Classification::OddEntangling { .. })
    }
}

/// `H = Σ c_α σ_α` in canonical form: sorted by string, merged, no zero or
/// identity terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    num_qubits: usize,
    terms: Vec<Term>,
}

impl Hamiltonian {
    pub fn zero(num_qubits: usize) -> Hamiltonian {
        Hamiltonian {
            num_qubits,
            terms: Vec::new(),
        }
    }

    /// Canonicalizes `terms`: merges equal strings, prunes `|c| < 1e-12` and
    /// drops identity terms.
    pub fn new(
        num_qubits: usize,
        terms: impl IntoIterator<Item = Term>,
    ) -> Result<Hamiltonian, PauliError> {
        let mut merged: BTreeMap<PhasedPauli, f64> = BTreeMap::new();
        for t in terms {
            if t.num_qubits() != num_qubits {
                return Err(PauliError::QubitMismatch {
                    left: num_qubits,
                    right: t.num_qubits(),
                });
            }
            if t.pauli.is_identity() {
                continue;
            }
            *merged.entry(t.pauli).or_insert(0.0) += t.coefficient;
        }
        Ok(Hamiltonian {
            num_qubits,
            terms: merged
                .into_iter()
                .filter(|(_, c)| c.abs() >= ZERO_THRESHOLD)
                .map(|(p, c)| Term::from_parts(c, p))
                .collect(),
        })
    }

    /// Convenience constructor from `(coefficient, string)` pairs.
    pub fn from_pairs(pairs: &[(f64, &str)]) -> Result<Hamiltonian, PauliError> {
        let terms: Vec<Term> = pairs
            .iter()
            .map(|&(c, s)| Term::new(c, s.parse()?))
            .collect::<Result<_, _>>()?;
        let n = terms.first().map(Term::num_qubits).ok_or(PauliError::Empty)?;
        Hamiltonian::new(n, terms)
    }

    pub fn from_term(term: Term) -> Hamiltonian {
        let n = term.num_qubits();
        Hamiltonian::new(n, [term]).expect("sizes agree")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_index(&self, pauli: &PhasedPauli) -> Option<usize> {
        self.terms
            .binary_search_by(|t| t.pauli.cmp_letters(pauli))
            .ok()
    }

    pub fn coefficient_of(&self, pauli: &PhasedPauli) -> f64 {
        self.term_index(pauli)
            .map_or(0.0, |i| self.terms[i].coefficient)
    }

    /// The single term, if there is exactly one.
    pub fn as_single_term(&self) -> Option<&Term> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn scaled(&self, factor: f64) -> Hamiltonian {
        Hamiltonian::new(self.num_qubits, self.terms.iter().map(|t| t.scaled(factor)))
            .expect("sizes agree")
    }

    pub fn add(&self, other: &Hamiltonian) -> Result<Hamiltonian, PauliError> {
        Hamiltonian::new(
            self.num_qubits,
            self.terms.iter().chain(&other.terms).cloned(),
        )
    }

    /// `i[self, other]`, expanded term by term.
    pub fn commutator(&self, other: &Hamiltonian) -> Result<Hamiltonian, PauliError> {
        if self.num_qubits != other.num_qubits {
            return Err(PauliError::QubitMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                if let Some(t) = commutator(a, b)? {
                    out.push(t);
                }
            }
        }
        Hamiltonian::new(self.num_qubits, out)
    }

    pub fn conjugate(&self, layer: &CliffordLayer) -> Result<Hamiltonian, PauliError> {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|t| t.conjugate(layer))
            .collect::<Result<_, _>>()?;
        Hamiltonian::new(self.num_qubits, terms)
    }

    /// Relabels qubit `q` as `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Hamiltonian {
        assert_eq!(perm.len(), self.num_qubits);
        let terms = self.terms.iter().map(|t| {
            let mut p = PhasedPauli::identity(self.num_qubits);
            for (q, l) in t.pauli.letters().enumerate() {
                p.set_letter(perm[q], l);
            }
            Term::from_parts(t.coefficient, p)
        });
        Hamiltonian::new(self.num_qubits, terms).expect("sizes agree")
    }

    /// Same strings, and coefficients within `tol · max(1, |c|)`.
    pub fn approx_eq(&self, other: &Hamiltonian, tol: f64) -> bool {
        self.num_qubits == other.num_qubits
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(a, b)| {
                a.pauli == b.pauli
                    && (a.coefficient - b.coefficient).abs()
                        <= tol * a.coefficient.abs().max(1.0)
            })
    }

    /// Connected components of the coupling hypergraph. Weight-1 terms couple
    /// nothing and contribute no edges.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.num_qubits);
        for t in &self.terms {
            let support = t.support();
            if let Some((&first, rest)) = support.qubits().split_first() {
                for &q in rest {
                    uf.union(first, q);
                }
            }
        }
        uf.groups()
    }

    pub fn is_entangling(&self) -> bool {
        self.connected_components().len() == 1
    }

    pub fn has_even_term(&self) -> bool {
        self.terms.iter().any(|t| t.weight() % 2 == 0)
    }

    /// Number of terms of each parity: `(odd, even)`.
    pub fn parity_census(&self) -> (usize, usize) {
        let odd = self.terms.iter().filter(|t| t.weight() % 2 == 1).count();
        (odd, self.terms.len() - odd)
    }

    /// Entangling Hamiltonians are universal iff some term has even weight;
    /// otherwise they generate `so(2^n)` (n even) or `sp(2^n)` (n odd).
    pub fn classify(&self) -> Classification {
        let components = self.connected_components();
        if components.len() > 1 {
            return Classification::NotEntangling { components };
        }
        let n = self.num_qubits;
        if self.has_even_term() {
            Classification::Universal {
                dimension: algebra_dimension(n, AlgebraKind::Universal),
            }
        } else {
            Classification::OddEntangling {
                algebra: Algebra::for_qubits(n),
                dimension: algebra_dimension(n, AlgebraKind::Odd),
            }
        }
    }

    /// Canonical text form; `parse_hamiltonian(h.to_text()) == h` exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits: {}\n", self.num_qubits);
        for t in &self.terms {
            out.push_str(&format!("{t}\n"));
        }
        out
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = t.coefficient;
            if i == 0 {
                write!(f, "{c}·{}", t.pauli)?;
            } else if c < 0.0 {
                write!(f, " - {}·{}", -c, t.pauli)?;
            } else {
                write!(f, " + {c}·{}", t.pauli)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Hamiltonian {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hamiltonian(s)
    }
}

fn column_of(line: &str, field: &str) -> usize {
    // `field` is a subslice of `line`.
    let offset = field.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// Parses the Hamiltonian text format. Identity terms are dropped with a
/// warning; an input with no surviving terms is an error.
pub fn parse_hamiltonian(text: &str) -> Result<Hamiltonian, ParseError> {
    let mut num_qubits: Option<usize> = None;
    let mut terms = Vec::new();
    let mut last_line = 0;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let err = |field: &str, kind| ParseError {
            line: line_no,
            column: column_of(raw, field),
            kind,
        };
        if let Some(rest) = trimmed.strip_prefix("qubits:") {
            let value = rest.trim();
            if num_qubits.is_some() || !terms.is_empty() {
                return Err(err(trimmed, ParseErrorKind::BadHeader(
                    "header must precede all terms".into(),
                )));
            }
            match value.parse::<usize>() {
                Ok(n) if n > 0 => num_qubits = Some(n),
                _ => {
                    return Err(err(trimmed, ParseErrorKind::BadHeader(format!(
                        "qubit count {value:?} is not a positive integer"
                    ))))
                }
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(coef_field), Some(pauli_field)) = (fields.next(), fields.next()) else {
            return Err(err(trimmed, ParseErrorKind::MissingField));
        };
        if let Some(extra) = fields.next() {
            return Err(err(extra, ParseErrorKind::MissingField));
        }
        let coefficient: f64 = coef_field
            .replace('\u{2212}', "-")
            .parse()
            .ok()
            .filter(|c: &f64| c.is_finite())
            .ok_or_else(|| err(coef_field, ParseErrorKind::BadCoefficient(coef_field.into())))?;
        let mut letters = Vec::with_capacity(pauli_field.len());
        for (offset, c) in pauli_field.char_indices() {
            let letter = Letter::from_char(c)
                .ok_or_else(|| err(&pauli_field[offset..], ParseErrorKind::InvalidCharacter(c)))?;
            letters.push(letter);
        }
        let n = *num_qubits.get_or_insert(letters.len());
        if letters.len() != n {
            return Err(err(pauli_field, ParseErrorKind::LengthMismatch {
                expected: n,
                found: letters.len(),
            }));
        }
        let pauli = PhasedPauli::from_letters(&letters);
        if pauli.is_identity() {
            log::warn!("line {line_no}: dropping identity term (global phase only)");
            continue;
        }
        terms.push(Term::from_parts(coefficient, pauli));
    }
    let empty = || ParseError {
        line: last_line.max(1),
        column: 1,
        kind: ParseErrorKind::Empty,
    };
    let n = num_qubits.ok_or_else(empty)?;
    let h = Hamiltonian::new(n, terms).expect("lengths checked");
    if h.is_empty() {
        return Err(empty());
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(text: &str) -> Hamiltonian {
        parse_hamiltonian(text).unwrap()
    }

    #[test]
    fn parses_two_term_chain() {
        let ham = h("1.0 XXI\n1.0 IXX");
        assert_eq!(ham.num_qubits(), 3);
        assert_eq!(ham.len(), 2);
        assert_eq!(ham.terms()[0].pauli().to_string(), "IXX");
    }

    #[test]
    fn ghz_projector_drops_identity() {
        let text = "1 III\n1 ZZI\n1 ZIZ\n1 IZZ\n-1 XYY\n-1 YXY\n-1 YYX\n";
        let ham = h(text);
        assert_eq!(ham.len(), 6);
        assert!(ham.classify().is_universal());
    }

    #[test]
    fn exact_cancellation_is_empty_error() {
        let e = parse_hamiltonian("1.0 XXI\n-1.0 XXI").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Empty);
    }

    #[test]
    fn header_comments_and_errors() {
        let ham = h("# chain\nqubits: 3\n\n0.5 XXI # first\n0.25 IXX\n");
        assert_eq!(ham.coefficient_of(&"XXI".parse().unwrap()), 0.5);

        let e = parse_hamiltonian("qubits: 3\n1.0 XQI").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        assert_eq!(e.kind, ParseErrorKind::InvalidCharacter('Q'));

        let e = parse_hamiltonian("1.0 XXI\n  2.0 XX").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert!(matches!(e.kind, ParseErrorKind::LengthMismatch { expected: 3, found: 2 }));

        let e = parse_hamiltonian("abc XXI").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadCoefficient("abc".into()));

        let e = parse_hamiltonian("qubits: 0\n1 X").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BadHeader(_)));

        let e = parse_hamiltonian("1.0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingField);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let ham = h("0.1 XYZ\n-3.25e-7 IZI\n12345.678 ZZZ");
        assert_eq!(parse_hamiltonian(&ham.to_text()).unwrap(), ham);
    }

    #[test]
    fn components_and_entangling() {
        assert!(h("1 XXI\n1 IXX").is_entangling());
        assert_eq!(h("qubits: 3\n1 XXI").connected_components(), vec![vec![0, 1], vec![2]]);
        assert!(h("1 ZZZII\n1 IIZZZ").is_entangling());
        // weight-1 terms connect nothing
        assert_eq!(h("1 XI\n1 IZ").connected_components().len(), 2);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            h("1 XXX").classify(),
            Classification::OddEntangling {
                algebra: Algebra::Sp,
                dimension: Some(36)
            }
        );
        assert_eq!(
            h("1 XXI\n1 IXX").classify(),
            Classification::Universal { dimension: Some(63) }
        );
        assert_eq!(
            h("1 ZZZII\n1 IIZZZ").classify(),
            Classification::OddEntangling {
                algebra: Algebra::Sp,
                dimension: Some(528)
            }
        );
        let ghz_prime = "1 III\n1 ZII\n1 IZI\n1 IIZ\n1 ZZI\n1 ZIZ\n1 IZZ\n1 ZZZ\n-1 XXX";
        assert!(h(ghz_prime).classify().is_universal());
        assert!(matches!(
            h("qubits: 3\n1 XXI").classify(),
            Classification::NotEntangling { .. }
        ));
    }

    #[test]
    fn coupling_set_enumeration() {
        let support = "XIYY".parse::<PhasedPauli>().unwrap().support();
        let set: Vec<String> = support.coupling_set(4).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(set.len(), 27);
        assert!(set.contains(&"XIXX".to_string()));
        assert!(set.contains(&"ZIZZ".to_string()));
        assert_eq!(set.first().unwrap(), "XIXX");
        assert_eq!(set.last().unwrap(), "ZIZZ");

        let single: Vec<String> = Support::new(vec![1])
            .coupling_set(3)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(single, ["IXI", "IYI", "IZI"]);
        assert!(Support::new(vec![3]).coupling_set(3).is_err());
    }

    #[test]
    fn term_folds_real_phase() {
        let t = Term::new(2.0, "-XY".parse().unwrap()).unwrap();
        assert_eq!(t.coefficient(), -2.0);
        assert!(Term::new(1.0, "iXY".parse().unwrap()).is_err());
    }
}
