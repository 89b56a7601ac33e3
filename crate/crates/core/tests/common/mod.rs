#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qmetapath::quantum::{GateKind, GateOp, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn single(u: DMatrix<Complex64>, qubit: usize, n: usize) -> DMatrix<Complex64> {
    let left = DMatrix::<Complex64>::identity(1 << qubit, 1 << qubit);
    let right_dim = 1 << (n - qubit - 1);
    let right = DMatrix::<Complex64>::identity(right_dim, right_dim);
    kron(&kron(&left, &u), &right)
}

/// Explicit 2ⁿ×2ⁿ matrix of one gate, qubit 0 most significant.
pub fn gate_matrix(gate: &GateOp, n: usize) -> DMatrix<Complex64> {
    match gate.kind {
        GateKind::Ry => {
            let (s, co) = (gate.angle / 2.0).sin_cos();
            let u = DMatrix::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)]);
            single(u, gate.target, n)
        }
        GateKind::Cnot => {
            let ctl = gate.control.unwrap();
            let dim = 1 << n;
            let cbit = 1 << (n - 1 - ctl);
            let tbit = 1 << (n - 1 - gate.target);
            let mut m = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let row = if col & cbit != 0 { col ^ tbit } else { col };
                m[(row, col)] = c(1.0);
            }
            m
        }
    }
}

pub fn circuit_matrix(circuit: &[GateOp], n: usize) -> DMatrix<Complex64> {
    circuit
        .iter()
        .fold(DMatrix::identity(1 << n, 1 << n), |acc, g| gate_matrix(g, n) * acc)
}

pub fn apply_matrix(m: &DMatrix<Complex64>, state: &StateVector) -> Vec<Complex64> {
    let v = DVector::from_column_slice(state.amplitudes());
    (m * v).iter().copied().collect()
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(amps).unwrap().normalize().unwrap()
}

pub fn random_circuit(n: usize, depth: usize, rng: &mut impl Rng) -> Vec<GateOp> {
    (0..depth)
        .map(|_| {
            if n > 1 && rng.gen_bool(0.4) {
                let ctl = rng.gen_range(0..n);
                let mut tgt = rng.gen_range(0..n - 1);
                if tgt >= ctl {
                    tgt += 1;
                }
                GateOp::cnot(ctl, tgt)
            } else {
                GateOp::ry(rng.gen_range(0..n), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            }
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
