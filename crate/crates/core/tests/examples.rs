mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use paulilie::closure::close;
use paulilie::isolation::sample_commuting_layer;
use paulilie::numeric::{evolve, hamiltonian_matrix, pauli_matrix, phase_aligned_distance, Step};
use paulilie::synthesis::AncillaState;
use paulilie::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> PhasedPauli {
    s.parse().unwrap()
}

fn term(c: f64, s: &str) -> Term {
    Term::new(c, p(s)).unwrap()
}

fn ham(pairs: &[(f64, &str)]) -> Hamiltonian {
    Hamiltonian::from_pairs(pairs).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn products() {
    assert_eq!(p("X").mul(&p("Y")).unwrap(), p("Z").with_phase(1));
    for s in ["XYZ", "ZZIX", "IIII"] {
        assert_eq!(p(s).mul(&p(s)).unwrap(), PhasedPauli::identity(s.len()));
    }
    assert_eq!(p("XXX").mul(&p("YXX")).unwrap(), p("ZII").with_phase(1));
    let dense = common::dense("XXX") * common::dense("YXX");
    assert!(common::max_abs(&(dense - common::dense("ZII") * c(0.0, 1.0))) < 1e-15);
}

#[test]
fn commutation() {
    assert!(p("XXX").commutes(&p("YXY")).unwrap());
    assert!(!p("XXX").commutes(&p("YXX")).unwrap());
    assert!(p("XYZ").commutes(&PhasedPauli::identity(3)).unwrap());
    assert!(p("X").commutes(&p("XX")).is_err());
    assert_eq!(commutator(&term(1.0, "XZ"), &term(2.0, "XZ")).unwrap(), None);
}

#[test]
fn conjugations() {
    let z = CliffordLayer::from_pauli(&p("Z"));
    assert_eq!(p("X").conjugate(&z).unwrap(), p("X").with_phase(2));
    assert_eq!(p("XYZ").conjugate(&CliffordLayer::identity(3)).unwrap(), p("XYZ"));
    let quarter = SingleQubitClifford::new(SignedAxis::minus(Axis::Z), SignedAxis::plus(Axis::X)).unwrap();
    let layer = CliffordLayer::new(vec![quarter]);
    assert_eq!(p("X").conjugate(&layer).unwrap(), p("Z").with_phase(2));
    let u = numeric::layer_matrix(&layer).unwrap();
    let got = &u * common::dense("X") * u.adjoint();
    assert!(common::max_abs(&(got + common::dense("Z"))) < 1e-12);
}

#[test]
fn parsing() {
    let h = parse_hamiltonian("1.0 XXI\n1.0 IXX").unwrap();
    assert_eq!((h.len(), h.num_qubits()), (2, 3));
    let ghz = parse_hamiltonian("1 III\n1 ZZI\n1 ZIZ\n1 IZZ\n-1 XYY\n-1 YXY\n-1 YYX\n").unwrap();
    assert_eq!(ghz.len(), 6);
    assert!(ghz.classify().is_universal());
    let err = parse_hamiltonian("1.0 XXI\n-1.0 XXI").unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::Empty);
    let err = parse_hamiltonian("1.0 XXI\n1.0 XQI").unwrap_err();
    assert_eq!((err.line, err.kind), (2, ParseErrorKind::InvalidCharacter('Q')));
    let err = parse_hamiltonian("1.0 XXI\n1.0 XX").unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::LengthMismatch { expected: 3, found: 2 });
    let err = parse_hamiltonian("abc XXI").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::BadCoefficient(_)));
}

#[test]
fn components_and_entanglement() {
    assert!(ham(&[(1.0, "XXI"), (1.0, "IXX")]).is_entangling());
    let lonely = ham(&[(1.0, "XXI")]);
    assert_eq!(lonely.connected_components(), vec![vec![0, 1], vec![2]]);
    assert!(!lonely.is_entangling());
    assert!(ham(&[(1.0, "ZZZII"), (1.0, "IIZZZ")]).is_entangling());
}

#[test]
fn classifications() {
    assert_eq!(
        ham(&[(1.0, "XXX")]).classify(),
        Classification::OddEntangling { algebra: Algebra::Sp, dimension: Some(36) }
    );
    assert_eq!(
        ham(&[(1.0, "XXI"), (1.0, "IXX")]).classify(),
        Classification::Universal { dimension: Some(63) }
    );
    assert_eq!(
        ham(&[(1.0, "ZZZII"), (1.0, "IIZZZ")]).classify(),
        Classification::OddEntangling { algebra: Algebra::Sp, dimension: Some(528) }
    );
}

#[test]
fn coupling_sets() {
    let s = p("XIYY").support();
    let set: Vec<PhasedPauli> = s.coupling_set(4).unwrap().collect();
    assert_eq!(set.len(), 27);
    assert!(set.contains(&p("XIXX")) && set.contains(&p("ZIZZ")));
    let single: Vec<String> = Support::new(vec![1]).coupling_set(3).unwrap().map(|q| q.to_string()).collect();
    assert_eq!(single, ["IXI", "IYI", "IZI"]);
    for k in 1..=4 {
        let support = Support::new((0..k).collect());
        let distinct: BTreeSet<String> = support.coupling_set(k).unwrap().map(|q| q.to_string()).collect();
        let brute = common::all_strings(k).into_iter().filter(|s| !s.contains('I')).count();
        assert_eq!(distinct.len(), brute);
        assert_eq!(brute, 3usize.pow(k as u32));
    }
    assert!(Support::new(vec![3]).coupling_set(3).is_err());
}

#[test]
fn closures() {
    let odd = close(&ham(&[(1.0, "XXX")]), true);
    assert_eq!(odd.dimension(), 36);
    assert!(odd.all_odd());
    let odd_set: BTreeSet<String> = odd.elements().iter().map(|q| q.to_string()).collect();
    assert_eq!(odd_set, common::odd_strings(3).into_iter().collect());
    assert_eq!(close(&ham(&[(1.0, "XXI"), (1.0, "IXX")]), true).dimension(), 63);
    let locals = closure::close_generators(2, closure::local_leaves(2)).unwrap();
    assert_eq!(locals.dimension(), 6);
    assert!(locals.elements().iter().all(|q| q.weight() == 1));
}

#[test]
fn dimensions() {
    assert_eq!(algebra_dimension(2, AlgebraKind::Odd), Some(6));
    assert_eq!(algebra_dimension(3, AlgebraKind::Odd), Some(36));
    assert_eq!(algebra_dimension(4, AlgebraKind::Odd), Some(120));
    assert_eq!(algebra_dimension(3, AlgebraKind::Universal), Some(63));
    for n in 1..=6 {
        assert_eq!(algebra_dimension(n, AlgebraKind::Odd), Some(common::odd_strings(n).len() as u128));
        let closed = if n % 2 == 0 {
            (1u128 << (n - 1)) * ((1 << n) - 1)
        } else {
            (1u128 << (n - 1)) * ((1 << n) + 1)
        };
        assert_eq!(algebra_dimension(n, AlgebraKind::Odd), Some(closed));
    }
}

#[test]
fn derivations_from_closure() {
    let h = ham(&[(1.0, "ZZZII"), (1.0, "IIZZZ")]);
    let c = close(&h, true);
    let leaf = c.extract_derivation(&p("ZZZII")).unwrap();
    assert_eq!(leaf.node_count(), 1);
    let tree = c.extract_derivation(&p("ZIIZZ")).unwrap();
    assert!(tree.commutator_count() >= 3);
    assert_eq!(tree.replay().unwrap().as_single_term().unwrap().pauli(), &p("ZIIZZ"));
    let c = close(&ham(&[(1.0, "XXI"), (1.0, "IXX")]), true);
    assert!(c.extract_derivation(&p("XXX")).is_ok());
}

#[test]
fn symbolic_schedules() {
    let h = ham(&[(1.0, "XZ"), (-0.5, "YY")]);
    assert_eq!(apply_schedule_symbolic(&h, &Schedule::empty(2)).unwrap(), h);
    let z = Schedule::new(CliffordLayer::identity(1), vec![p("Z")]).unwrap();
    assert!(apply_schedule_symbolic(&ham(&[(1.0, "X")]), &z).unwrap().is_empty());
    assert_eq!(apply_schedule_symbolic(&ham(&[(1.0, "Z"), (1.0, "X")]), &z).unwrap(), ham(&[(2.0, "Z")]));
}

#[test]
fn commuting_layers() {
    // the oracle skips the identity layer
    let commuting = common::all_strings(2).into_iter().filter(|s| p(s).commutes(&p("ZZ")).unwrap()).count();
    assert_eq!(commuting + 1, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut z_count = 0;
    for _ in 0..4000 {
        let draw = sample_commuting_layer(&p("Z"), &mut rng);
        assert!(draw.layer == p("I") || draw.layer == p("Z"));
        z_count += (draw.layer == p("Z")) as usize;
    }
    // ½ within 4σ, σ = √(4000/4)
    assert!((z_count as f64 - 2000.0).abs() < 4.0 * 1000f64.sqrt());
    for _ in 0..200 {
        assert!(sample_commuting_layer(&p("ZZ"), &mut rng).layer.commutes(&p("ZZ")).unwrap());
    }
}

#[test]
fn randomized_success_is_exact() {
    let h = ham(&[(0.7, "XXI"), (1.0, "IXX"), (-0.3, "ZIZ")]);
    let run = randomized_isolation(&h, &RandomizedIsolationParams { m: 30, seed: 1, target: 0 }).unwrap();
    assert!(run.success);
    let target = h.terms()[0].clone();
    assert_eq!(run.result, Hamiltonian::from_term(target.scaled(2f64.powi(30))));
}

#[test]
fn reductions() {
    let source = term(1.0, "XXXXX");
    let same = reduce_odd_support(&source, &source.support()).unwrap();
    assert_eq!(same.commutator_count(), 0);
    let down = reduce_odd_support(&source, &Support::new(vec![2, 3, 4])).unwrap();
    assert_eq!(down.replay().unwrap().as_single_term().unwrap().support(), Support::new(vec![2, 3, 4]));
    let big = reduce_odd_support(&term(0.5, "YZXYZXY"), &Support::new(vec![0, 3, 6])).unwrap();
    assert_eq!(big.replay().unwrap().as_single_term().unwrap().support(), Support::new(vec![0, 3, 6]));
    assert!(reduce_odd_support(&source, &Support::new(vec![0, 1])).is_err());
}

#[test]
fn isolating_sets_on_examples() {
    let h = ham(&[(1.0, "ZZZII"), (1.0, "IIZZZ")]);
    let set = find_isolating_set(&h).unwrap();
    set.check().unwrap();
    assert_eq!(set.couplings.len(), 2);
    assert!([0, 1, 3, 4].contains(&set.isolated_qubit));
    let single = find_isolating_set(&ham(&[(1.0, "XYZ")])).unwrap();
    assert_eq!((single.couplings.len(), single.isolated_qubit), (1, 2));
}

#[test]
fn odd_targets() {
    let h = ham(&[(1.0, "ZZZII"), (1.0, "IIZZZ")]);
    let leaf = derive_odd_target(&h, &p("IIZZZ")).unwrap();
    assert_eq!(leaf.node_count(), 1);
    let tree = derive_odd_target(&ham(&[(1.0, "XXX")]), &p("ZII")).unwrap();
    assert_eq!(tree.replay().unwrap().as_single_term().unwrap().pauli(), &p("ZII"));
    assert!(matches!(derive_odd_target(&h, &p("ZZIII")), Err(SynthesisError::EvenTarget(_))));
}

#[test]
fn encoded_targets() {
    let zzz = ham(&[(1.0, "ZZZ")]);
    let even = derive_encoded(&zzz, &p("ZZ")).unwrap();
    assert_eq!((even.extended_target.clone(), even.ancilla, even.ancilla_state), (p("ZZZ"), 2, AncillaState::Zero));
    let odd = derive_encoded(&zzz, &p("ZI")).unwrap();
    assert_eq!(odd.extended_target, p("ZII"));
    let five = derive_encoded(&ham(&[(1.0, "ZZZII"), (1.0, "IIZZZ")]), &p("ZIIZ")).unwrap();
    assert_eq!((five.extended_target.clone(), five.ancilla), (p("ZIIZZ"), 4));
    assert!(synthesis::ancilla_is_stationary(&five.tree, 4));
}

#[test]
fn matrices() {
    let z = pauli_matrix(&p("Z")).unwrap();
    assert_eq!(z, common::dense("Z"));
    assert_eq!(z[(1, 1)], c(-1.0, 0.0));
    let iy = pauli_matrix(&p("Y").with_phase(1)).unwrap();
    assert_eq!([iy[(0, 1)], iy[(1, 0)]], [c(1.0, 0.0), c(-1.0, 0.0)]);
    let h = hamiltonian_matrix(&ham(&[(1.0, "XXI"), (1.0, "IXX")])).unwrap();
    assert!(common::max_abs(&(&h - common::dense_sum(&[(1.0, "XXI".into()), (1.0, "IXX".into())], 3))) < 1e-15);
    let mut eig: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    // XXI and IXX commute, so the spectrum is every ±1 ± 1.
    let expect = [-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0];
    assert!(eig.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12));
}

#[test]
fn evolutions() {
    let z = DenseOperator::from_pauli(&p("Z")).unwrap();
    let u = evolve(&z, PI).unwrap();
    assert!(common::max_abs(&(u.matrix() + common::dense("I"))) < 1e-12);
    let x = DenseOperator::from_pauli(&p("X")).unwrap();
    let u = evolve(&x, PI / 2.0).unwrap();
    assert!(common::max_abs(&(u.matrix() - common::dense("X") * c(0.0, -1.0))) < 1e-12);
}

#[test]
fn compiled_shapes() {
    let leaf = DerivationTree::given(term(1.0, "XZ"));
    let program = compile(&leaf, &TrotterParams::new(0.3, 0.01)).unwrap();
    assert_eq!(program.steps.len(), 1);
    assert!(matches!(&program.steps[0], Step::Evolve { time, .. } if (*time - 0.3).abs() < 1e-15));

    let combo = DerivationTree::combine(vec![
        (1.0, DerivationTree::local(p("ZI"))),
        (1.0, DerivationTree::local(p("IZ"))),
    ])
    .unwrap();
    let program = compile(&combo, &TrotterParams::new(0.2, 0.01)).unwrap();
    assert_eq!(program.primitive_count(), 40);
    let u = program.unitary().unwrap();
    let exact = numeric::evolve_hamiltonian(&ham(&[(1.0, "ZI"), (1.0, "IZ")]), 0.2).unwrap();
    assert!(phase_aligned_distance(&u, &exact) < 1e-12);

    let exact_tree = DerivationTree::rescale(
        DerivationTree::conjugate(DerivationTree::given(term(1.0, "XY")), CliffordLayer::from_pauli(&p("ZI"))).unwrap(),
        3.0,
    )
    .unwrap();
    for delta in [0.1, 0.01] {
        assert!(verify(&exact_tree, &TrotterParams::new(0.4, delta)).unwrap() <= 1e-9);
    }
}
