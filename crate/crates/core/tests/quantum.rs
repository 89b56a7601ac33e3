mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qmetapath::quantum::{census, GateOp, GateRole, Observable, StateVector};
use qmetapath::Error;
use rand::Rng;

#[test]
fn gates_match_explicit_matrices() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let depth = r.gen_range(1..=7);
        let circuit = random_circuit(n, depth, &mut r);
        let psi = random_state(n, &mut r);
        let want = apply_matrix(&circuit_matrix(&circuit, n), &psi);
        let got = psi.apply_circuit(&circuit).unwrap();
        assert!(max_diff(got.amplitudes(), &want) < 1e-12, "seed {seed}");
    }
}

#[test]
fn cnot_on_basis_states() {
    // qubit 0 is the most significant bit
    let s = StateVector::basis(2, 0b10).unwrap().apply_cnot(0, 1).unwrap();
    assert_eq!(s.amplitude(0b11), Complex64::new(1.0, 0.0));
    let s = StateVector::basis(2, 0b01).unwrap().apply_cnot(0, 1).unwrap();
    assert_eq!(s.amplitude(0b01), Complex64::new(1.0, 0.0));
    let s = StateVector::basis(3, 0b001).unwrap().apply_cnot(2, 0).unwrap();
    assert_eq!(s.amplitude(0b101), Complex64::new(1.0, 0.0));
}

#[test]
fn invalid_gates_are_rejected() {
    let s = StateVector::zero(2).unwrap();
    assert!(matches!(s.clone().apply_ry(2, 0.1), Err(Error::InvalidQubit { .. })));
    assert!(s.clone().apply_cnot(1, 1).is_err());
    assert!(s.apply_ry(0, f64::NAN).is_err());
}

#[test]
fn weighted_sum_matches_manual_combination() {
    let mut r = rng(5);
    let psi = random_state(3, &mut r);
    let terms: Vec<(f64, Vec<GateOp>)> = (0..3)
        .map(|_| (r.gen_range(0.1..1.0), random_circuit(3, 4, &mut r)))
        .collect();
    let mut want = vec![Complex64::new(0.0, 0.0); 8];
    for (w, circ) in &terms {
        let branch = apply_matrix(&circuit_matrix(circ, 3), &psi);
        for (a, b) in want.iter_mut().zip(branch) {
            *a += b * w;
        }
    }
    let norm = want.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let sum = psi.apply_weighted_sum(&terms).unwrap();
    assert!((sum.pre_norm - norm).abs() < 1e-12);
    let want: Vec<Complex64> = want.into_iter().map(|a| a / norm).collect();
    assert!(max_diff(sum.state.amplitudes(), &want) < 1e-12);
}

#[test]
fn weighted_sum_cancellation_is_an_error() {
    let psi = StateVector::zero(1).unwrap();
    let terms = vec![(1.0, vec![]), (-1.0, vec![])];
    assert!(matches!(
        psi.apply_weighted_sum(&terms),
        Err(Error::DestructiveCancellation { .. })
    ));
}

#[test]
fn census_counts_slots_by_role() {
    census::reset();
    let psi = StateVector::zero(3).unwrap();
    let psi = psi
        .apply(&GateOp::ry(0, 0.3).with_role(GateRole::Feature))
        .unwrap()
        .apply(&GateOp::cnot(0, 2).with_role(GateRole::Entangler))
        .unwrap();
    let branch = |a: f64| vec![GateOp::ry(2, a).with_role(GateRole::Path)];
    let sum = psi.apply_weighted_sum(&[(0.6, branch(0.1)), (0.4, branch(0.9))]).unwrap();
    sum.state.expectation(&Observable::PauliZ(1)).unwrap();
    let c = census::snapshot();
    assert_eq!(c.feature_ry, 1);
    assert_eq!(c.path_ry, 1);
    assert_eq!(c.cnot, 1);
    assert_eq!(c.expectations, 1);
    assert_eq!(c.kernel_ry, 3);
}

#[test]
fn clones_get_fresh_ids() {
    let a = StateVector::zero(2).unwrap();
    let b = a.clone();
    assert_ne!(a.id(), b.id());
    assert_eq!(a.amplitudes(), b.amplitudes());
}

#[test]
fn dump_writes_one_row_per_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.txt");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap().dump(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    let first: Vec<f64> = rows[0].split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, h, 0.0]);
}

fn circuit_strategy(n: usize, max_depth: usize) -> impl Strategy<Value = Vec<GateOp>> {
    let ry = (0..n, -10.0..10.0f64).prop_map(|(q, a)| GateOp::ry(q, a));
    let gate = if n > 1 {
        let cnot = (0..n, 1..n).prop_map(move |(c, d)| GateOp::cnot(c, (c + d) % n));
        prop_oneof![ry, cnot].boxed()
    } else {
        ry.boxed()
    };
    proptest::collection::vec(gate, 0..=max_depth)
}

fn state_strategy(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n).prop_filter_map(
        "non-zero",
        |v| {
            let amps = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            StateVector::from_amplitudes(amps).ok()?.normalize().ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_preserved(
        (n, circuit) in (1usize..=12).prop_flat_map(|n| (Just(n), circuit_strategy(n, 20)))
    ) {
        let out = StateVector::zero(n).unwrap()
            .apply(&GateOp::ry(0, 1.1)).unwrap()
            .apply_circuit(&circuit).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_circuit_restores_state(
        (psi, circuit) in (1usize..=5).prop_flat_map(|n| (state_strategy(n), circuit_strategy(n, 12)))
    ) {
        let inverse: Vec<GateOp> = circuit.iter().rev().map(GateOp::inverse).collect();
        let back = psi.clone().apply_circuit(&circuit).unwrap().apply_circuit(&inverse).unwrap();
        prop_assert!(back.max_abs_diff(&psi) < 1e-12);
    }

    #[test]
    fn matches_matrix_oracle(
        (psi, circuit) in (1usize..=3).prop_flat_map(|n| (state_strategy(n), circuit_strategy(n, 7)))
    ) {
        let n = psi.n_qubits();
        let want = apply_matrix(&circuit_matrix(&circuit, n), &psi);
        let got = psi.apply_circuit(&circuit).unwrap();
        prop_assert!(max_diff(got.amplitudes(), &want) < 1e-12);
    }

    #[test]
    fn tensor_is_associative(a in state_strategy(1), b in state_strategy(2), c in state_strategy(2)) {
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn expectation_is_linear(
        psi in state_strategy(3),
        da in proptest::collection::vec(-5.0..5.0f64, 8),
        db in proptest::collection::vec(-5.0..5.0f64, 8),
        alpha in -3.0..3.0f64,
        beta in -3.0..3.0f64,
    ) {
        let ea = psi.expectation(&Observable::Diagonal(da.clone())).unwrap();
        let eb = psi.expectation(&Observable::Diagonal(db.clone())).unwrap();
        let combined = Observable::combine(alpha, &da, beta, &db).unwrap();
        let e = psi.expectation(&combined).unwrap();
        prop_assert!((e - (alpha * ea + beta * eb)).abs() < 1e-12);
    }

    #[test]
    fn pauli_z_is_bounded(psi in state_strategy(4), q in 0usize..4) {
        let z = psi.expectation(&Observable::PauliZ(q)).unwrap();
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&z));
    }
}
