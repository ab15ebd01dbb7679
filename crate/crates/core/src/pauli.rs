//! Phased n-qubit Pauli products in binary symplectic form.
//!
//! A [`PhasedPauli`] stores one x-bit and one z-bit per qubit plus a phase
//! exponent `k` so that the operator is `i^k · σ_1 ⊗ … ⊗ σ_n`, where qubit `q`
//! carries `X` when only its x-bit is set, `Z` when only its z-bit is set, `Y`
//! when both are set and `I` otherwise. Qubit 0 is the leftmost character of
//! the text form.
//!
//! Phases are tracked exactly as an exponent mod 4.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::{smallvec, SmallVec};

use crate::error::PauliError;
use crate::hamiltonian::{Support, Term};

type Words = SmallVec<[u64; 1]>;

fn word_count(num_qubits: usize) -> usize {
    num_qubits.div_ceil(64)
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    /// Axis of a non-identity letter.
    pub fn axis(self) -> Option<Axis> {
        match self {
            Letter::I => None,
            Letter::X => Some(Axis::X),
            Letter::Y => Some(Axis::Y),
            Letter::Z => Some(Axis::Z),
        }
    }
}

/// A Pauli axis: the non-identity single-qubit Paulis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> Letter {
        match self {
            Axis::X => Letter::X,
            Axis::Y => Letter::Y,
            Axis::Z => Letter::Z,
        }
    }
}

/// `±axis`, the image of a Pauli under single-qubit Clifford conjugation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedAxis {
    pub negative: bool,
    pub axis: Axis,
}

impl SignedAxis {
    pub const fn plus(axis: Axis) -> Self {
        SignedAxis { negative: false, axis }
    }

    pub const fn minus(axis: Axis) -> Self {
        SignedAxis { negative: true, axis }
    }

    fn all() -> [SignedAxis; 6] {
        [
            SignedAxis::plus(Axis::X),
            SignedAxis::plus(Axis::Y),
            SignedAxis::plus(Axis::Z),
            SignedAxis::minus(Axis::X),
            SignedAxis::minus(Axis::Y),
            SignedAxis::minus(Axis::Z),
        ]
    }
}

impl fmt::Display for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { '-' } else { '+' };
        write!(f, "{sign}{}", self.axis.letter().as_char())
    }
}

/// Product of two single-qubit letters: `a·b = i^k · c`.
fn letter_product(a: Letter, b: Letter) -> (u8, Letter) {
    use Letter::*;
    match (a, b) {
        (I, p) | (p, I) => (0, p),
        (X, X) | (Y, Y) | (Z, Z) => (0, I),
        (X, Y) => (1, Z),
        (Y, X) => (3, Z),
        (Y, Z) => (1, X),
        (Z, Y) => (3, X),
        (Z, X) => (1, Y),
        (X, Z) => (3, Y),
    }
}

/// An n-qubit Pauli product with a quarter phase `i^phase_exp`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    num_qubits: usize,
    x: Words,
    z: Words,
    phase: u8,
}

impl PhasedPauli {
    pub fn identity(num_qubits: usize) -> Self {
        let words = word_count(num_qubits);
        PhasedPauli {
            num_qubits,
            x: smallvec![0; words],
            z: smallvec![0; words],
            phase: 0,
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PhasedPauli::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    /// `letter` on qubit `qubit`, identity elsewhere.
    pub fn single(num_qubits: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = PhasedPauli::identity(num_qubits);
        p.set_letter(qubit, letter);
        p
    }

    /// The same letter on every qubit of `support`.
    pub fn uniform(num_qubits: usize, support: &[usize], letter: Letter) -> Self {
        let mut p = PhasedPauli::identity(num_qubits);
        for &q in support {
            p.set_letter(q, letter);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase_exp: u8) -> Self {
        self.phase = phase_exp % 4;
        self
    }

    /// The bare string, phase dropped.
    pub fn unsigned(&self) -> PhasedPauli {
        self.clone().with_phase(0)
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        assert!(qubit < self.num_qubits, "qubit {qubit} out of range");
        let (w, b) = (qubit / 64, qubit % 64);
        Letter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set_letter(&mut self, qubit: usize, letter: Letter) {
        assert!(qubit < self.num_qubits, "qubit {qubit} out of range");
        let (w, b) = (qubit / 64, qubit % 64);
        let (x, z) = letter.bits();
        let mask = 1u64 << b;
        self.x[w] = (self.x[w] & !mask) | if x { mask } else { 0 };
        self.z[w] = (self.z[w] & !mask) | if z { mask } else { 0 };
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.num_qubits).map(|q| self.letter(q))
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_odd(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Hermitian iff the phase is real (`±1`).
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn support(&self) -> Support {
        Support::new(
            (0..self.num_qubits)
                .filter(|&q| self.letter(q) != Letter::I)
                .collect(),
        )
    }

    fn check_same_size(&self, other: &PhasedPauli) -> Result<(), PauliError> {
        if self.num_qubits != other.num_qubits {
            return Err(PauliError::QubitMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }

    /// Matrix product `self · other` with the phase tracked mod 4.
    ///
    /// With `P = i^{k + |x∧z|} X^x Z^z`, moving `Z^{z1}` past `X^{x2}` costs
    /// `(-1)^{|z1∧x2|}`; the Y-count of the result is then divided back out.
    pub fn mul(&self, other: &PhasedPauli) -> Result<PhasedPauli, PauliError> {
        self.check_same_size(other)?;
        let x: Words = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z: Words = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        let phase = self.phase as u32
            + other.phase as u32
            + popcount_and(&self.x, &self.z)
            + popcount_and(&other.x, &other.z)
            + 2 * popcount_and(&self.z, &other.x)
            + 3 * popcount_and(&x, &z);
        Ok(PhasedPauli {
            num_qubits: self.num_qubits,
            x,
            z,
            phase: (phase % 4) as u8,
        })
    }

    /// Parity of the symplectic inner product: `true` iff the two anticommute.
    pub fn symplectic_product(&self, other: &PhasedPauli) -> Result<bool, PauliError> {
        self.check_same_size(other)?;
        let s = popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x);
        Ok(s % 2 == 1)
    }

    pub fn commutes(&self, other: &PhasedPauli) -> Result<bool, PauliError> {
        Ok(!self.symplectic_product(other)?)
    }

    /// `L p L†` for a layer of single-qubit Cliffords.
    pub fn conjugate(&self, layer: &CliffordLayer) -> Result<PhasedPauli, PauliError> {
        if layer.num_qubits() != self.num_qubits {
            return Err(PauliError::QubitMismatch {
                left: self.num_qubits,
                right: layer.num_qubits(),
            });
        }
        let mut out = PhasedPauli::identity(self.num_qubits);
        let mut phase = self.phase;
        for (q, gate) in layer.gates().iter().enumerate() {
            let Some(axis) = self.letter(q).axis() else {
                continue;
            };
            let image = gate.image(axis);
            if image.negative {
                phase += 2;
            }
            out.set_letter(q, image.axis.letter());
        }
        out.phase = phase % 4;
        Ok(out)
    }

    /// Text form with an explicit phase prefix (`+`, `-`, `+i`, `-i`).
    pub fn to_phased_string(&self) -> String {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        format!("{prefix}{self}")
    }

    /// Lexicographic order of the bare strings under `I < X < Y < Z`.
    pub fn cmp_letters(&self, other: &PhasedPauli) -> Ordering {
        self.num_qubits.cmp(&other.num_qubits).then_with(|| {
            for q in 0..self.num_qubits {
                match self.letter(q).cmp(&other.letter(q)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl Ord for PhasedPauli {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_letters(other)
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for PhasedPauli {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PhasedPauli {
    /// Bare string; the phase is only shown by [`PhasedPauli::to_phased_string`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters().map(Letter::as_char).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_phased_string())
    }
}

impl FromStr for PhasedPauli {
    type Err = PauliError;

    /// Accepts `XYZI`-style strings with an optional `+`, `-`, `+i`, `-i` or
    /// `i` prefix. The Unicode minus sign is accepted as well.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s
            .strip_prefix("-i")
            .or_else(|| s.strip_prefix("\u{2212}i"))
        {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-').or_else(|| s.strip_prefix('\u{2212}')) {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else {
            (0, s)
        };
        if body.is_empty() {
            return Err(PauliError::Empty);
        }
        let mut letters = Vec::with_capacity(body.len());
        for (position, c) in body.chars().enumerate() {
            letters.push(
                Letter::from_char(c).ok_or(PauliError::InvalidChar { ch: c, position })?,
            );
        }
        Ok(PhasedPauli::from_letters(&letters).with_phase(phase))
    }
}

/// `i[A, B] = i(AB − BA)` for two real-weighted Pauli terms.
///
/// Returns `None` when the terms commute. Anticommuting Pauli products have a
/// product phase of `±i`, so the result is again a Hermitian term with a real
/// coefficient `2·c_a·c_b·Re(i·phase(ab))`.
pub fn commutator(a: &Term, b: &Term) -> Result<Option<Term>, PauliError> {
    if a.pauli().commutes(b.pauli())? {
        return Ok(None);
    }
    let product = a.pauli().mul(b.pauli())?;
    // i · i^k with k odd is real: +1 for k = 3, -1 for k = 1.
    let sign = if product.phase_exp() == 3 { 1.0 } else { -1.0 };
    let coefficient = 2.0 * a.coefficient() * b.coefficient() * sign;
    Ok(Some(Term::from_parts(coefficient, product.unsigned())))
}

/// Single-qubit Clifford, stored by the images of `X` and `Z` under `C · C†`.
///
/// The image of `Y = iXZ` is `i · C(X) · C(Z)`, which is always a signed axis
/// because the two stored images anticommute.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingleQubitClifford {
    image_x: SignedAxis,
    image_z: SignedAxis,
}

impl Default for SingleQubitClifford {
    fn default() -> Self {
        SingleQubitClifford::IDENTITY
    }
}

impl SingleQubitClifford {
    pub const IDENTITY: SingleQubitClifford = SingleQubitClifford {
        image_x: SignedAxis::plus(Axis::X),
        image_z: SignedAxis::plus(Axis::Z),
    };

    pub fn new(image_x: SignedAxis, image_z: SignedAxis) -> Result<Self, PauliError> {
        if image_x.axis == image_z.axis {
            return Err(PauliError::CommutingImages);
        }
        Ok(SingleQubitClifford { image_x, image_z })
    }

    /// All 24 single-qubit Cliffords (modulo global phase), in a fixed order.
    pub fn all() -> impl Iterator<Item = SingleQubitClifford> {
        SignedAxis::all().into_iter().flat_map(|ix| {
            SignedAxis::all()
                .into_iter()
                .filter_map(move |iz| SingleQubitClifford::new(ix, iz).ok())
        })
    }

    /// Conjugation by the Pauli `letter` itself (`σ P σ`).
    pub fn pauli(letter: Letter) -> Self {
        let flip = |axis: Axis| {
            let commutes = letter == Letter::I || letter == axis.letter();
            SignedAxis { negative: !commutes, axis }
        };
        SingleQubitClifford {
            image_x: flip(Axis::X),
            image_z: flip(Axis::Z),
        }
    }

    /// The first Clifford in [`SingleQubitClifford::all`] order taking `from`
    /// to `+to`; the identity when `from == to`.
    pub fn mapping(from: Axis, to: Axis) -> Self {
        if from == to {
            return SingleQubitClifford::IDENTITY;
        }
        SingleQubitClifford::all()
            .find(|c| c.image(from) == SignedAxis::plus(to))
            .expect("every axis pair is related by some Clifford")
    }

    pub fn image_x(&self) -> SignedAxis {
        self.image_x
    }

    pub fn image_z(&self) -> SignedAxis {
        self.image_z
    }

    pub fn image(&self, axis: Axis) -> SignedAxis {
        match axis {
            Axis::X => self.image_x,
            Axis::Z => self.image_z,
            Axis::Y => {
                let (k, letter) =
                    letter_product(self.image_x.axis.letter(), self.image_z.axis.letter());
                let mut phase = 1 + k;
                if self.image_x.negative {
                    phase += 2;
                }
                if self.image_z.negative {
                    phase += 2;
                }
                debug_assert!(phase % 2 == 0);
                SignedAxis {
                    negative: phase % 4 == 2,
                    axis: letter.axis().expect("anticommuting images"),
                }
            }
        }
    }

    /// Conjugation by `self` followed by `other`.
    pub fn then(&self, other: &SingleQubitClifford) -> SingleQubitClifford {
        let apply = |s: SignedAxis| {
            let img = other.image(s.axis);
            SignedAxis {
                negative: img.negative ^ s.negative,
                axis: img.axis,
            }
        };
        SingleQubitClifford {
            image_x: apply(self.image_x),
            image_z: apply(self.image_z),
        }
    }

    pub fn inverse(&self) -> SingleQubitClifford {
        SingleQubitClifford::all()
            .find(|c| self.then(c) == SingleQubitClifford::IDENTITY)
            .expect("Clifford group is closed under inverses")
    }

    pub fn is_identity(&self) -> bool {
        *self == SingleQubitClifford::IDENTITY
    }

    /// The Pauli whose conjugation this is, if any.
    pub fn as_pauli(&self) -> Option<Letter> {
        Letter::ALL
            .into_iter()
            .find(|&l| SingleQubitClifford::pauli(l) == *self)
    }
}

impl fmt::Display for SingleQubitClifford {
    /// `+Z+X` style: image of X, then image of Z.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.image_x, self.image_z)
    }
}

impl FromStr for SingleQubitClifford {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_signed = |chunk: &str| -> Result<SignedAxis, PauliError> {
            let mut chars = chunk.chars();
            let negative = match chars.next() {
                Some('+') => false,
                Some('-') => true,
                _ => return Err(PauliError::InvalidClifford(s.to_string())),
            };
            let axis = chars
                .next()
                .and_then(Letter::from_char)
                .and_then(Letter::axis)
                .ok_or_else(|| PauliError::InvalidClifford(s.to_string()))?;
            Ok(SignedAxis { negative, axis })
        };
        if s.len() != 4 || !s.is_ascii() {
            return Err(PauliError::InvalidClifford(s.to_string()));
        }
        SingleQubitClifford::new(parse_signed(&s[..2])?, parse_signed(&s[2..])?)
    }
}

/// One single-qubit Clifford per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordLayer {
    gates: Vec<SingleQubitClifford>,
}

impl CliffordLayer {
    pub fn identity(num_qubits: usize) -> Self {
        CliffordLayer {
            gates: vec![SingleQubitClifford::IDENTITY; num_qubits],
        }
    }

    pub fn new(gates: Vec<SingleQubitClifford>) -> Self {
        CliffordLayer { gates }
    }

    /// Conjugation by the Pauli product `p` (its phase is irrelevant).
    pub fn from_pauli(p: &PhasedPauli) -> Self {
        CliffordLayer {
            gates: p.letters().map(SingleQubitClifford::pauli).collect(),
        }
    }

    pub fn single(num_qubits: usize, qubit: usize, gate: SingleQubitClifford) -> Self {
        let mut layer = CliffordLayer::identity(num_qubits);
        layer.gates[qubit] = gate;
        layer
    }

    pub fn num_qubits(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[SingleQubitClifford] {
        &self.gates
    }

    pub fn gate(&self, qubit: usize) -> SingleQubitClifford {
        self.gates[qubit]
    }

    pub fn set_gate(&mut self, qubit: usize, gate: SingleQubitClifford) {
        self.gates[qubit] = gate;
    }

    pub fn inverse(&self) -> CliffordLayer {
        CliffordLayer {
            gates: self.gates.iter().map(SingleQubitClifford::inverse).collect(),
        }
    }

    /// Conjugation by `self` followed by `other`.
    pub fn then(&self, other: &CliffordLayer) -> CliffordLayer {
        assert_eq!(self.num_qubits(), other.num_qubits());
        CliffordLayer {
            gates: self
                .gates
                .iter()
                .zip(&other.gates)
                .map(|(a, b)| a.then(b))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.gates.iter().all(SingleQubitClifford::is_identity)
    }

    /// The Pauli product this layer conjugates by, if it is Pauli-only.
    pub fn as_pauli(&self) -> Option<PhasedPauli> {
        let letters: Option<Vec<Letter>> =
            self.gates.iter().map(SingleQubitClifford::as_pauli).collect();
        letters.map(|l| PhasedPauli::from_letters(&l))
    }

    pub fn is_pauli_only(&self) -> bool {
        self.as_pauli().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PhasedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_y_is_i_z() {
        let r = p("X").mul(&p("Y")).unwrap();
        assert_eq!(r.to_string(), "Z");
        assert_eq!(r.phase_exp(), 1);
    }

    #[test]
    fn three_qubit_product() {
        let r = p("XXX").mul(&p("YXX")).unwrap();
        assert_eq!(r, p("+iZII"));
    }

    #[test]
    fn squares_are_identity() {
        for s in ["XYZ", "IIY", "ZZZZ", "YIXZ"] {
            let sq = p(s).mul(&p(s)).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase_exp(), 0);
        }
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        assert!(matches!(
            p("XX").mul(&p("XXX")),
            Err(PauliError::QubitMismatch { left: 2, right: 3 })
        ));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XXX").commutes(&p("YXY")).unwrap());
        assert!(!p("XXX").commutes(&p("YXX")).unwrap());
        assert!(p("XYZ").commutes(&p("III")).unwrap());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("-iXYZ").to_phased_string(), "-iXYZ");
        assert_eq!(p("\u{2212}ZZ").phase_exp(), 2);
        assert_eq!(p("iX").phase_exp(), 1);
        assert!(matches!(
            "XQ".parse::<PhasedPauli>(),
            Err(PauliError::InvalidChar { ch: 'Q', position: 1 })
        ));
        assert!(matches!("-".parse::<PhasedPauli>(), Err(PauliError::Empty)));
    }

    #[test]
    fn conjugation_by_z_flips_x() {
        let layer = CliffordLayer::from_pauli(&p("Z"));
        assert_eq!(p("X").conjugate(&layer).unwrap(), p("-X"));
        assert_eq!(p("Y").conjugate(&layer).unwrap(), p("-Y"));
        assert_eq!(p("Z").conjugate(&layer).unwrap(), p("Z"));
    }

    #[test]
    fn identity_layer_is_trivial() {
        let q = p("-iXYZI");
        assert_eq!(q.conjugate(&CliffordLayer::identity(4)).unwrap(), q);
    }

    #[test]
    fn quarter_turn_about_y() {
        let c = SingleQubitClifford::new(SignedAxis::minus(Axis::Z), SignedAxis::plus(Axis::X))
            .unwrap();
        let out = p("X").conjugate(&CliffordLayer::new(vec![c])).unwrap();
        assert_eq!(out, p("-Z"));
    }

    #[test]
    fn there_are_24_cliffords_with_inverses() {
        let all: Vec<_> = SingleQubitClifford::all().collect();
        assert_eq!(all.len(), 24);
        for c in all {
            assert!(c.then(&c.inverse()).is_identity());
            assert_eq!(c.to_string().parse::<SingleQubitClifford>().unwrap(), c);
        }
    }

    #[test]
    fn canonical_mappings_hit_positive_target() {
        for from in Axis::ALL {
            for to in Axis::ALL {
                let c = SingleQubitClifford::mapping(from, to);
                assert_eq!(c.image(from), SignedAxis::plus(to));
            }
        }
        let h = SingleQubitClifford::mapping(Axis::X, Axis::Z);
        assert_eq!(h.image(Axis::Z), SignedAxis::plus(Axis::X));
    }

    #[test]
    fn pauli_layers_are_self_inverse() {
        let layer = CliffordLayer::from_pauli(&p("XYZI"));
        assert!(layer.is_pauli_only());
        assert_eq!(layer.inverse(), layer);
        let q = p("YYXZ");
        let twice = q.conjugate(&layer).unwrap().conjugate(&layer).unwrap();
        assert_eq!(twice, q);
    }

    #[test]
    fn commutator_conventions() {
        let t = |c: f64, s: &str| Term::new(c, p(s)).unwrap();
        let r = commutator(&t(1.0, "XXX"), &t(1.0, "YXX")).unwrap().unwrap();
        assert_eq!(r, t(-2.0, "ZII"));
        let r = commutator(&t(1.0, "XXXX"), &t(1.0, "ZXXI")).unwrap().unwrap();
        assert_eq!(r, t(2.0, "YIIX"));
        let r = commutator(&t(1.0, "XXXXX"), &t(1.0, "IIIYX")).unwrap().unwrap();
        assert_eq!(r, t(-2.0, "XXXZI"));
        assert!(commutator(&t(3.0, "XYZ"), &t(1.0, "XYZ")).unwrap().is_none());
    }

    #[test]
    fn ordering_is_letter_lexicographic() {
        let mut v = vec![p("ZI"), p("IX"), p("XY"), p("XI"), p("YZ")];
        v.sort();
        let s: Vec<String> = v.iter().map(|q| q.to_string()).collect();
        assert_eq!(s, ["IX", "XI", "XY", "YZ", "ZI"]);
    }

    #[test]
    fn wide_strings_span_words() {
        let mut a = PhasedPauli::identity(130);
        a.set_letter(0, Letter::X);
        a.set_letter(70, Letter::Y);
        a.set_letter(129, Letter::Z);
        assert_eq!(a.weight(), 3);
        let b = PhasedPauli::single(130, 129, Letter::X);
        assert!(!a.commutes(&b).unwrap());
        assert_eq!(a.support().qubits(), &[0, 70, 129]);
    }
}
