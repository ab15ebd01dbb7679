//! Dense-matrix oracle for small systems: Pauli matrices, exact evolution,
//! compilation of derivation trees into gate/evolution programs, and the
//! orthogonal/symplectic embedding checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::closure::all_strings;
use crate::derivation::{DerivationTree, Node};
use crate::error::NumericError;
use crate::hamiltonian::{Algebra, Hamiltonian};
use crate::pauli::{Axis, CliffordLayer, Letter, PhasedPauli, SignedAxis, SingleQubitClifford};

pub type Matrix = DMatrix<Complex64>;

/// Largest register for plain matrix products.
pub const MATRIX_QUBIT_CAP: usize = 8;
/// Largest register for compiled derivations.
pub const VERIFY_QUBIT_CAP: usize = 6;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_cap(num_qubits: usize, cap: usize) -> Result<(), NumericError> {
    if num_qubits > cap {
        Err(NumericError::SizeCap { num_qubits, cap })
    } else {
        Ok(())
    }
}

pub fn letter_matrix(letter: Letter) -> Matrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match letter {
        Letter::I => Matrix::from_row_slice(2, 2, &[one, z, z, one]),
        Letter::X => Matrix::from_row_slice(2, 2, &[z, one, one, z]),
        Letter::Y => Matrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Letter::Z => Matrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

fn kron_all(factors: impl IntoIterator<Item = Matrix>) -> Matrix {
    factors
        .into_iter()
        .fold(Matrix::identity(1, 1), |acc, m| acc.kronecker(&m))
}

fn phase_factor(k: u8) -> Complex64 {
    match k % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

/// `i^k ⊗_q σ_q`, qubit 0 as the most significant tensor factor.
pub fn pauli_matrix(p: &PhasedPauli) -> Result<Matrix, NumericError> {
    check_cap(p.num_qubits(), MATRIX_QUBIT_CAP)?;
    Ok(kron_all(p.letters().map(letter_matrix)) * phase_factor(p.phase_exp()))
}

pub fn hamiltonian_matrix(h: &Hamiltonian) -> Result<Matrix, NumericError> {
    check_cap(h.num_qubits(), MATRIX_QUBIT_CAP)?;
    let d = 1usize << h.num_qubits();
    let mut m = Matrix::zeros(d, d);
    for t in h.terms() {
        m += pauli_matrix(t.pauli())? * c(t.coefficient(), 0.0);
    }
    Ok(m)
}

/// A `2^n × 2^n` complex operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    num_qubits: usize,
    matrix: Matrix,
}

impl DenseOperator {
    pub fn new(num_qubits: usize, matrix: Matrix) -> Result<DenseOperator, NumericError> {
        let d = 1usize << num_qubits;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(NumericError::DimensionMismatch {
                left: d,
                right: matrix.nrows(),
            });
        }
        Ok(DenseOperator { num_qubits, matrix })
    }

    pub fn identity(num_qubits: usize) -> DenseOperator {
        let d = 1usize << num_qubits;
        DenseOperator {
            num_qubits,
            matrix: Matrix::identity(d, d),
        }
    }

    pub fn from_pauli(p: &PhasedPauli) -> Result<DenseOperator, NumericError> {
        Ok(DenseOperator {
            num_qubits: p.num_qubits(),
            matrix: pauli_matrix(p)?,
        })
    }

    pub fn from_hamiltonian(h: &Hamiltonian) -> Result<DenseOperator, NumericError> {
        Ok(DenseOperator {
            num_qubits: h.num_qubits(),
            matrix: hamiltonian_matrix(h)?,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        max_abs(&(self.matrix.adjoint() * &self.matrix - Matrix::identity(d, d)))
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator {
            num_qubits: self.num_qubits,
            matrix: &self.matrix * &other.matrix,
        }
    }
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn operator_norm(m: &Matrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// `e^{−iHt}` via Hermitian eigendecomposition.
pub fn evolve(h: &DenseOperator, t: f64) -> Result<DenseOperator, NumericError> {
    let defect = h.hermiticity_defect();
    let scale = max_abs(&h.matrix).max(1.0);
    if defect > HERMITIAN_TOLERANCE * scale {
        return Err(NumericError::NotHermitian(defect));
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (&h.matrix + h.matrix.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t));
    let v = &eig.eigenvectors;
    let matrix = v * Matrix::from_diagonal(&phases) * v.adjoint();
    Ok(DenseOperator {
        num_qubits: h.num_qubits,
        matrix,
    })
}

/// `e^{−iHt}` of a symbolic Hamiltonian; closed form for a single term.
pub fn evolve_hamiltonian(h: &Hamiltonian, t: f64) -> Result<Matrix, NumericError> {
    if let Some(term) = h.as_single_term() {
        let p = pauli_matrix(term.pauli())?;
        let theta = term.coefficient() * t;
        let d = p.nrows();
        return Ok(Matrix::identity(d, d) * c(theta.cos(), 0.0) - p * c(0.0, theta.sin()));
    }
    if h.is_empty() {
        let d = 1usize << h.num_qubits();
        return Ok(Matrix::identity(d, d));
    }
    Ok(evolve(&DenseOperator::from_hamiltonian(h)?, t)?.matrix)
}

fn signed_axis_eigvec(a: SignedAxis) -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let s = if a.negative { -1.0 } else { 1.0 };
    match a.axis {
        Axis::Z if !a.negative => [c(1.0, 0.0), c(0.0, 0.0)],
        Axis::Z => [c(0.0, 0.0), c(1.0, 0.0)],
        Axis::X => [c(r, 0.0), c(s * r, 0.0)],
        Axis::Y => [c(r, 0.0), c(0.0, s * r)],
    }
}

fn signed_axis_matrix(a: SignedAxis) -> Matrix {
    let m = letter_matrix(a.axis.letter());
    if a.negative {
        -m
    } else {
        m
    }
}

/// Unitary `U` with `U σ U† = C(σ)`: columns are the `+1` eigenvector of
/// the image of `Z` and that vector mapped by the image of `X`.
pub fn clifford_matrix(g: &SingleQubitClifford) -> Matrix {
    let v0 = signed_axis_eigvec(g.image_z());
    let v0 = Matrix::from_column_slice(2, 1, &v0);
    let v1 = signed_axis_matrix(g.image_x()) * &v0;
    Matrix::from_columns(&[v0.column(0), v1.column(0)])
}

pub fn layer_matrix(layer: &CliffordLayer) -> Result<Matrix, NumericError> {
    check_cap(layer.num_qubits(), MATRIX_QUBIT_CAP)?;
    Ok(kron_all(layer.gates().iter().map(clifford_matrix)))
}

/// Time step and commutator cycle parameter for compilation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct TrotterParams {
    pub time: f64,
    /// Slice width for sums.
    pub delta: f64,
    /// Group-commutator cycle parameter; `⌈τ/δ²⌉` cycles realize `τ`, with
    /// the sign of the parameter alternating between cycles.
    pub cycle_delta: f64,
}

impl TrotterParams {
    pub fn new(time: f64, delta: f64) -> TrotterParams {
        TrotterParams {
            time,
            delta,
            cycle_delta: delta,
        }
    }

    pub fn with_cycle_delta(mut self, cycle_delta: f64) -> TrotterParams {
        self.cycle_delta = cycle_delta;
        self
    }

    fn validate(&self) -> Result<(), NumericError> {
        for v in [self.delta, self.cycle_delta] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(NumericError::NonPositiveStep(v));
            }
        }
        Ok(())
    }
}

/// One primitive of a compiled program, listed in time order.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// The layer's unitary, or its adjoint.
    Clifford { layer: CliffordLayer, adjoint: bool },
    /// `e^{−iHt}` for a resource Hamiltonian.
    Evolve { hamiltonian: Hamiltonian, time: f64 },
    Repeat { count: u64, body: Vec<Step> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledProgram {
    pub num_qubits: usize,
    pub steps: Vec<Step>,
}

const SLICE_SLACK: f64 = 1e-9;

fn slices(duration: f64, width: f64) -> u64 {
    ((duration.abs() / width - SLICE_SLACK).ceil() as u64).max(1)
}

fn compile_node(tree: &DerivationTree, tau: f64, p: &TrotterParams, out: &mut Vec<Step>) -> Result<(), NumericError> {
    match tree.node() {
        Node::Given(_) | Node::LocalPauli(_) => out.push(Step::Evolve {
            hamiltonian: tree.effective().clone(),
            time: tau,
        }),
        Node::Conjugate { child, layer } => {
            out.push(Step::Clifford {
                layer: layer.clone(),
                adjoint: true,
            });
            compile_node(child, tau, p, out)?;
            out.push(Step::Clifford {
                layer: layer.clone(),
                adjoint: false,
            });
        }
        Node::Rescale { child, factor } => compile_node(child, factor * tau, p, out)?,
        Node::Combine { parts } => {
            let n = slices(tau, p.delta);
            let s = tau / n as f64;
            let mut body = Vec::new();
            for (w, child) in parts {
                compile_node(child, w * s, p, &mut body)?;
            }
            push_repeat(out, n, body);
        }
        Node::Commutator { left, right } => {
            // i[B, A] = −i[A, B]: a negative duration swaps the roles.
            let (a, b) = if tau >= 0.0 { (left, right) } else { (right, left) };
            let n = ((tau.abs() / (p.cycle_delta * p.cycle_delta) - SLICE_SLACK).ceil() as u64).max(1);
            let d = (tau.abs() / n as f64).sqrt();
            // Cycles alternate the sign of d: the d³ error terms are odd in d
            // and cancel pairwise, while each cycle keeps its leading d²[A,B].
            let cycle = |d: f64, body: &mut Vec<Step>| -> Result<(), NumericError> {
                compile_node(b, d, p, body)?;
                compile_node(a, -d, p, body)?;
                compile_node(b, -d, p, body)?;
                compile_node(a, d, p, body)
            };
            if n >= 2 {
                let mut pair = Vec::new();
                cycle(d, &mut pair)?;
                cycle(-d, &mut pair)?;
                push_repeat(out, n / 2, pair);
            }
            if n % 2 == 1 {
                cycle(d, out)?;
            }
        }
        Node::Isolate { source, schedule } => {
            let n = slices(tau, p.delta);
            let s = tau / n as f64;
            let m = schedule.layer_count();
            let mut body = Vec::new();
            for mask in 0u64..(1u64 << m) {
                let mut layer = schedule.basis_change().clone();
                for (j, l) in schedule.layers().iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        layer = layer.then(&CliffordLayer::from_pauli(l));
                    }
                }
                body.push(Step::Clifford {
                    layer: layer.clone(),
                    adjoint: true,
                });
                body.push(Step::Evolve {
                    hamiltonian: source.clone(),
                    time: s,
                });
                body.push(Step::Clifford { layer, adjoint: false });
            }
            push_repeat(out, n, body);
        }
    }
    Ok(())
}

fn push_repeat(out: &mut Vec<Step>, count: u64, body: Vec<Step>) {
    if count == 1 {
        out.extend(body);
    } else {
        out.push(Step::Repeat { count, body });
    }
}

/// Compiles `tree` into a product of local Clifford layers and resource
/// evolutions approximating `e^{−i H_eff t}`.
pub fn compile(tree: &DerivationTree, params: &TrotterParams) -> Result<CompiledProgram, NumericError> {
    params.validate()?;
    let mut steps = Vec::new();
    compile_node(tree, params.time, params, &mut steps)?;
    Ok(CompiledProgram {
        num_qubits: tree.num_qubits(),
        steps,
    })
}

fn steps_matrix(steps: &[Step], n: usize) -> Result<Matrix, NumericError> {
    let d = 1usize << n;
    let mut u = Matrix::identity(d, d);
    for step in steps {
        u = step_matrix(step, n)? * u;
    }
    Ok(u)
}

fn step_matrix(step: &Step, n: usize) -> Result<Matrix, NumericError> {
    Ok(match step {
        Step::Clifford { layer, adjoint } => {
            let m = layer_matrix(layer)?;
            if *adjoint {
                m.adjoint()
            } else {
                m
            }
        }
        Step::Evolve { hamiltonian, time } => evolve_hamiltonian(hamiltonian, *time)?,
        Step::Repeat { count, body } => matrix_power(&steps_matrix(body, n)?, *count),
    })
}

pub fn matrix_power(m: &Matrix, mut k: u64) -> Matrix {
    let d = m.nrows();
    let mut result = Matrix::identity(d, d);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

fn count_steps(steps: &[Step]) -> u128 {
    steps
        .iter()
        .map(|s| match s {
            Step::Repeat { count, body } => *count as u128 * count_steps(body),
            _ => 1,
        })
        .sum()
}

impl CompiledProgram {
    /// The program's unitary (later steps on the left).
    pub fn unitary(&self) -> Result<Matrix, NumericError> {
        check_cap(self.num_qubits, VERIFY_QUBIT_CAP)?;
        steps_matrix(&self.steps, self.num_qubits)
    }

    /// Primitive steps after unrolling all repeats.
    pub fn primitive_count(&self) -> u128 {
        count_steps(&self.steps)
    }

    /// Total evolution time spent on resources, after unrolling.
    pub fn evolution_time(&self) -> f64 {
        fn walk(steps: &[Step]) -> f64 {
            steps
                .iter()
                .map(|s| match s {
                    Step::Evolve { time, .. } => time.abs(),
                    Step::Repeat { count, body } => *count as f64 * walk(body),
                    Step::Clifford { .. } => 0.0,
                })
                .sum()
        }
        walk(&self.steps)
    }

    /// Unitaries after each top-level step.
    pub fn partial_unitaries(&self) -> Result<Vec<Matrix>, NumericError> {
        check_cap(self.num_qubits, VERIFY_QUBIT_CAP)?;
        let d = 1usize << self.num_qubits;
        let mut u = Matrix::identity(d, d);
        let mut out = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            u = step_matrix(step, self.num_qubits)? * u;
            out.push(u.clone());
        }
        Ok(out)
    }
}

/// `min_φ ‖U − e^{iφ} V‖₂`, with `φ` taken from `tr(V†U)`.
pub fn phase_aligned_distance(u: &Matrix, v: &Matrix) -> f64 {
    let overlap = (v.adjoint() * u).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    operator_norm(&(u - v * phase))
}

/// Error of the compiled tree against exact evolution under its root
/// effective Hamiltonian for `params.time`.
pub fn verify(tree: &DerivationTree, params: &TrotterParams) -> Result<f64, NumericError> {
    check_cap(tree.num_qubits(), VERIFY_QUBIT_CAP)?;
    let program = compile(tree, params)?;
    let u = program.unitary()?;
    let exact = evolve_hamiltonian(tree.effective(), params.time)?;
    Ok(phase_aligned_distance(&u, &exact))
}

/// `(Δ, error)` for `levels` halvings of `params.delta` and
/// `params.cycle_delta`.
pub fn verify_ladder(
    tree: &DerivationTree,
    params: &TrotterParams,
    levels: usize,
) -> Result<Vec<(f64, f64)>, NumericError> {
    let mut p = *params;
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        out.push((p.delta, verify(tree, &p)?));
        p.delta /= 2.0;
        p.cycle_delta /= 2.0;
    }
    Ok(out)
}

/// Least-squares slope of `ln e` against `ln Δ`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// `⟨0|_a U |0⟩_a` on the remaining qubits, which keep their order.
pub fn ancilla_block(u: &Matrix, num_qubits: usize, ancilla: usize) -> Matrix {
    let d = 1usize << (num_qubits - 1);
    let bit = num_qubits - 1 - ancilla;
    let embed = |r: usize| {
        let high = (r >> bit) << (bit + 1);
        let low = r & ((1 << bit) - 1);
        high | low
    };
    Matrix::from_fn(d, d, |i, j| u[(embed(i), embed(j))])
}

/// Average over system inputs of the probability that an ancilla started
/// in `|0⟩` is found in `|0⟩`: `tr(M†M)/d` for the ancilla block `M`.
pub fn ancilla_population(u: &Matrix, num_qubits: usize, ancilla: usize) -> f64 {
    let m = ancilla_block(u, num_qubits, ancilla);
    (m.adjoint() * &m).trace().re / m.nrows() as f64
}

/// Minimum over computational system inputs of the `|0⟩` ancilla
/// population.
pub fn min_ancilla_population(u: &Matrix, num_qubits: usize, ancilla: usize) -> f64 {
    let m = ancilla_block(u, num_qubits, ancilla);
    (0..m.ncols())
        .map(|j| m.column(j).norm_squared())
        .fold(f64::INFINITY, f64::min)
}

/// State-averaged fidelity `(tr(MM†) + |tr M|²) / (d(d+1))` of `M = V†U`.
pub fn average_gate_fidelity(u: &Matrix, v: &Matrix) -> f64 {
    let m = v.adjoint() * u;
    let d = m.nrows() as f64;
    let mm = (&m * m.adjoint()).trace().re;
    (mm + m.trace().norm_sqr()) / (d * (d + 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieEmbeddingReport {
    pub num_qubits: usize,
    pub algebra: Algebra,
    pub odd_checked: usize,
    pub odd_passed: usize,
    /// Even strings for which the defining condition fails, as it should.
    pub even_checked: usize,
    pub even_failed: usize,
    pub max_odd_deviation: f64,
}

impl LieEmbeddingReport {
    pub fn all_pass(&self) -> bool {
        self.odd_passed == self.odd_checked && self.even_failed == self.even_checked
    }
}

/// Checks, for every string `σ` on `n` qubits with `A = iσ`, that
/// `f(A) = Y^{⊗n} Aᵀ Y^{⊗n} = −A` exactly for odd `σ`, and that the rotated
/// `B = U†AU` satisfies the orthogonal (`Bᵀ = −B`, n even) or symplectic
/// (`J†BᵀJ = −B`, `J = Y⊗I`, n odd) condition. Even strings are expected to
/// fail.
pub fn check_lie_embedding(num_qubits: usize) -> Result<LieEmbeddingReport, NumericError> {
    const TOL: f64 = 1e-12;
    let n = num_qubits;
    check_cap(n, MATRIX_QUBIT_CAP)?;
    let d = 1usize << n;
    let id = Matrix::identity(d, d);
    let y_all = pauli_matrix(&PhasedPauli::uniform(n, &(0..n).collect::<Vec<_>>(), Letter::Y))?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (u, j) = if n % 2 == 0 {
        ((&id - &y_all * c(0.0, 1.0)) * c(r, 0.0), None)
    } else {
        let tail = pauli_matrix(&PhasedPauli::uniform(n - 1, &(0..n - 1).collect::<Vec<_>>(), Letter::Y))?;
        let dt = tail.nrows();
        let rot = (Matrix::identity(dt, dt) - tail * c(0.0, 1.0)) * c(r, 0.0);
        let u = Matrix::identity(2, 2).kronecker(&rot);
        let j = letter_matrix(Letter::Y).kronecker(&Matrix::identity(dt, dt));
        (u, Some(j))
    };

    let mut report = LieEmbeddingReport {
        num_qubits: n,
        algebra: Algebra::for_qubits(n),
        odd_checked: 0,
        odd_passed: 0,
        even_checked: 0,
        even_failed: 0,
        max_odd_deviation: 0.0,
    };
    for s in all_strings(n) {
        let a = pauli_matrix(&s)? * c(0.0, 1.0);
        let f = &y_all * a.transpose() * &y_all;
        let f_dev = max_abs(&(&f + &a));
        let b = u.adjoint() * &a * &u;
        let cond_dev = match &j {
            None => max_abs(&(b.transpose() + &b)).max(max_abs(&(b.adjoint() + &b))),
            Some(j) => max_abs(&(j.adjoint() * b.transpose() * j + &b)),
        };
        let dev = f_dev.max(cond_dev);
        if s.is_odd() {
            report.odd_checked += 1;
            report.max_odd_deviation = report.max_odd_deviation.max(dev);
            if dev <= TOL {
                report.odd_passed += 1;
            }
        } else {
            report.even_checked += 1;
            if dev > TOL {
                report.even_failed += 1;
            }
        }
    }
    Ok(report)
}
