//! Hamiltonian families and random generators for experiments and tests.

use rand::seq::index::sample;
use rand::Rng;

use crate::hamiltonian::{Hamiltonian, Term};
use crate::pauli::{Letter, PhasedPauli};

/// 3-local chain: `X_i X_{i+1}` and `X_i X_{i+1} X_{i+2}`, `2n − 3` terms.
pub fn chain_family(num_qubits: usize) -> Hamiltonian {
    assert!(num_qubits >= 2);
    let n = num_qubits;
    let mut terms = Vec::new();
    for width in [2, 3] {
        for start in 0..=(n.saturating_sub(width)) {
            if start + width <= n {
                let support: Vec<usize> = (start..start + width).collect();
                terms.push(unit(PhasedPauli::uniform(n, &support, Letter::X)));
            }
        }
    }
    Hamiltonian::new(n, terms).expect("sizes agree")
}

/// `X` on every subset of two or more qubits, `2^n − n − 1` terms.
pub fn all_subsets_family(num_qubits: usize) -> Hamiltonian {
    let n = num_qubits;
    assert!((2..=20).contains(&n));
    let terms = (0u32..(1 << n))
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| {
            let support: Vec<usize> = (0..n).filter(|q| mask >> (n - 1 - q) & 1 == 1).collect();
            unit(PhasedPauli::uniform(n, &support, Letter::X))
        });
    Hamiltonian::new(n, terms).expect("sizes agree")
}

fn unit(p: PhasedPauli) -> Term {
    Term::new(1.0, p).expect("unsigned strings are Hermitian")
}

/// Random string of exactly `weight` non-identity letters.
pub fn random_string<R: Rng + ?Sized>(num_qubits: usize, weight: usize, rng: &mut R) -> PhasedPauli {
    let mut p = PhasedPauli::identity(num_qubits);
    for q in sample(rng, num_qubits, weight) {
        p.set_letter(q, Letter::NON_IDENTITY[rng.random_range(0..3)]);
    }
    p
}

/// Random coefficient with magnitude in `[0.25, 2)` and random sign.
fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let mag = rng.random_range(0.25..2.0);
    if rng.random_bool(0.5) {
        mag
    } else {
        -mag
    }
}

/// Random entangling Hamiltonian whose terms all have odd weight.
/// Needs `n ≥ 3`.
pub fn random_odd_entangling<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Hamiltonian {
    let n = num_qubits;
    assert!(n >= 3, "odd entangling Hamiltonians need three qubits");
    let odd_weights: Vec<usize> = (1..=n).filter(|w| w % 2 == 1).collect();
    loop {
        let count = rng.random_range(1..=n + 1);
        let terms = (0..count).map(|_| {
            let w = odd_weights[rng.random_range(0..odd_weights.len())];
            Term::new(random_coefficient(rng), random_string(n, w, rng)).expect("unsigned")
        });
        let h = Hamiltonian::new(n, terms.collect::<Vec<_>>()).expect("sizes agree");
        if h.is_entangling() {
            return h;
        }
    }
}

/// Random entangling Hamiltonian with at least one even-weight term.
pub fn random_universal<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Hamiltonian {
    let n = num_qubits;
    assert!(n >= 2);
    loop {
        let count = rng.random_range(1..=n + 1);
        let terms = (0..count).map(|_| {
            let w = rng.random_range(1..=n);
            Term::new(random_coefficient(rng), random_string(n, w, rng)).expect("unsigned")
        });
        let h = Hamiltonian::new(n, terms.collect::<Vec<_>>()).expect("sizes agree");
        if h.is_entangling() && h.has_even_term() {
            return h;
        }
    }
}

/// Random Hamiltonian with `count` terms of arbitrary weight; may repeat
/// strings (merged) or be non-entangling.
pub fn random_hamiltonian<R: Rng + ?Sized>(num_qubits: usize, count: usize, rng: &mut R) -> Hamiltonian {
    let terms: Vec<Term> = (0..count)
        .map(|_| {
            let w = rng.random_range(1..=num_qubits);
            Term::new(random_coefficient(rng), random_string(num_qubits, w, rng)).expect("unsigned")
        })
        .collect();
    Hamiltonian::new(num_qubits, terms).expect("sizes agree")
}
