//! Independent oracles: dense matrices built entry by entry and brute-force
//! string enumeration.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;

fn single(ch: char) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match ch {
        'I' => [[l, o], [o, l]],
        'X' => [[o, l], [l, o]],
        'Y' => [[o, -i], [i, o]],
        'Z' => [[l, o], [o, -l]],
        _ => panic!("bad letter {ch}"),
    }
}

/// Dense matrix of an unsigned string, first character = most significant bit.
pub fn dense(s: &str) -> M {
    let letters: Vec<_> = s.chars().map(single).collect();
    let n = letters.len();
    let d = 1 << n;
    M::from_fn(d, d, |r, c| {
        let mut v = Complex64::new(1.0, 0.0);
        for (q, m) in letters.iter().enumerate() {
            let bit = n - 1 - q;
            v *= m[(r >> bit) & 1][(c >> bit) & 1];
        }
        v
    })
}

pub fn dense_sum(terms: &[(f64, String)], n: usize) -> M {
    let d = 1 << n;
    let mut m = M::zeros(d, d);
    for (c, s) in terms {
        m += dense(s) * Complex64::new(*c, 0.0);
    }
    m
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `i(AB − BA)`.
pub fn dense_commutator(a: &M, b: &M) -> M {
    (a * b - b * a) * Complex64::new(0.0, 1.0)
}

/// Reads `M = c · P` off a dense matrix for a known string `P`.
pub fn coefficient_on(m: &M, s: &str) -> f64 {
    let p = dense(s);
    let d = p.nrows() as f64;
    ((p.adjoint() * m).trace() / d).re
}

/// Every non-identity string on `n` qubits, by counting in base 4.
pub fn all_strings(n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for code in 1..(1usize << (2 * n)) {
        let s: String = (0..n)
            .map(|q| ['I', 'X', 'Y', 'Z'][(code >> (2 * (n - 1 - q))) & 3])
            .collect();
        out.push(s);
    }
    out
}

pub fn odd_strings(n: usize) -> BTreeSet<String> {
    all_strings(n)
        .into_iter()
        .filter(|s| s.chars().filter(|&c| c != 'I').count() % 2 == 1)
        .collect()
}
