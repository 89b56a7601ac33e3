use std::fmt;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use super::census;
use super::gate::{GateKind, GateOp};
use super::observable::Observable;
use crate::error::{Error, Result};

/// Capacity used by [`StateVector::tensor`]: the full 24-qubit architecture.
pub const DEFAULT_QUBIT_CAPACITY: usize = 24;

/// Hard ceiling for any dense state this crate will allocate (16 GiB at 30).
const MAX_QUBITS: usize = 30;

/// Weighted sums whose norm falls below this are treated as cancelled.
const CANCELLATION_NORM: f64 = 1e-12;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

/// Dense state vector over `n` qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so for two
/// qubits the amplitudes are ordered |00⟩, |01⟩, |10⟩, |11⟩ with the left
/// label belonging to qubit 0.
///
/// Gate methods take `self` by value and hand back the evolved state; clone
/// first to keep the input. Every value carries a process-unique id (clones
/// get a new one) that the [`census`] touch log uses to prove two
/// computations never shared a state object.
pub struct StateVector {
    id: u64,
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Result of [`StateVector::apply_weighted_sum`].
#[derive(Debug)]
pub struct WeightedSum {
    pub state: StateVector,
    /// Norm of Σ w·C(ψ) before renormalization.
    pub pre_norm: f64,
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` wires.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: n_qubits,
                capacity: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Shape {
                expected: dim,
                actual: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self::from_parts(n_qubits, amps))
    }

    /// Wrap raw amplitudes. The length must be a power of two; the vector is
    /// taken as given, not normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Shape {
                expected: dim.next_power_of_two().max(1),
                actual: dim,
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: n_qubits,
                capacity: MAX_QUBITS,
            });
        }
        Ok(Self::from_parts(n_qubits, amps))
    }

    /// Real amplitudes, convenient for tests and encodings.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    fn from_parts(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        let id = fresh_id();
        census::touch(id);
        StateVector { id, n_qubits, amps }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest elementwise distance to `other`; `f64::INFINITY` on a
    /// dimension mismatch.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn bit(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.n_qubits {
            return Err(Error::InvalidQubit {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(1 << (self.n_qubits - 1 - qubit))
    }

    pub fn apply_ry(self, qubit: usize, angle: f64) -> Result<Self> {
        self.apply(&GateOp::ry(qubit, angle))
    }

    pub fn apply_cnot(self, control: usize, target: usize) -> Result<Self> {
        self.apply(&GateOp::cnot(control, target))
    }

    pub fn apply(mut self, gate: &GateOp) -> Result<Self> {
        census::touch(self.id);
        match gate.kind {
            GateKind::Ry => {
                let bit = self.bit(gate.target)?;
                if !gate.angle.is_finite() {
                    return Err(Error::Numeric("rotation angle"));
                }
                ry_kernel(&mut self.amps, bit, gate.angle);
            }
            GateKind::Cnot => {
                let control = gate
                    .control
                    .ok_or_else(|| Error::InvalidGate("CNOT without a control qubit".into()))?;
                if control == gate.target {
                    return Err(Error::InvalidGate(format!(
                        "CNOT control and target are both qubit {control}"
                    )));
                }
                let cbit = self.bit(control)?;
                let tbit = self.bit(gate.target)?;
                cnot_kernel(&mut self.amps, cbit, tbit);
            }
        }
        census::kernel(gate);
        Ok(self)
    }

    pub fn apply_circuit(self, circuit: &[GateOp]) -> Result<Self> {
        circuit.iter().try_fold(self, |state, gate| state.apply(gate))
    }

    /// Tensor product `self ⊗ other` under the default 24-qubit capacity.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        self.tensor_within(other, DEFAULT_QUBIT_CAPACITY)
    }

    /// Tensor product with an explicit qubit budget. The amplitude at
    /// combined index `i·dim(other) + j` is `self[i]·other[j]`.
    pub fn tensor_within(&self, other: &StateVector, capacity: usize) -> Result<Self> {
        let requested = self.n_qubits + other.n_qubits;
        if requested > capacity.min(MAX_QUBITS) {
            return Err(Error::Capacity {
                requested,
                capacity: capacity.min(MAX_QUBITS),
            });
        }
        census::touch(self.id);
        census::touch(other.id);
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self::from_parts(requested, amps))
    }

    pub fn normalize(mut self) -> Result<Self> {
        census::touch(self.id);
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    /// ⟨ψ|O|ψ⟩ for a diagonal observable. Each call counts as one terminal
    /// measurement in the census.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        census::touch(self.id);
        let value = match obs {
            Observable::PauliZ(qubit) => {
                let bit = self.bit(*qubit)?;
                self.amps
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let p = a.norm_sqr();
                        if i & bit == 0 {
                            p
                        } else {
                            -p
                        }
                    })
                    .sum()
            }
            Observable::Diagonal(diag) => {
                if diag.len() != self.dim() {
                    return Err(Error::Shape {
                        expected: self.dim(),
                        actual: diag.len(),
                    });
                }
                self.amps
                    .iter()
                    .zip(diag)
                    .map(|(a, d)| d * a.norm_sqr())
                    .sum()
            }
        };
        census::expectation();
        Ok(value)
    }

    /// Σ wᵢ·Cᵢ(ψ) followed by renormalization.
    ///
    /// A sum of unitaries is not unitary, so the raw norm is reported in
    /// [`WeightedSum::pre_norm`]. Gates that occupy the same slot across
    /// branches are counted once in the census.
    pub fn apply_weighted_sum(&self, terms: &[(f64, Vec<GateOp>)]) -> Result<WeightedSum> {
        if terms.is_empty() {
            return Err(Error::param("terms", "weighted sum needs at least one entry"));
        }
        if terms.iter().any(|(w, _)| !w.is_finite()) {
            return Err(Error::Numeric("weighted-sum weight"));
        }
        census::touch(self.id);

        let mut slots = Vec::new();
        for (_, circuit) in terms {
            for gate in circuit {
                if !slots.iter().any(|g: &GateOp| g.slot() == gate.slot()) {
                    slots.push(*gate);
                }
            }
        }

        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim()];
        {
            let _mute = MuteGuard::new();
            for (weight, circuit) in terms {
                let branch = self.clone().apply_circuit(circuit)?;
                for (a, b) in acc.iter_mut().zip(&branch.amps) {
                    *a += b * weight;
                }
            }
        }
        slots.iter().for_each(census::logical);

        let state = Self::from_parts(self.n_qubits, acc);
        let pre_norm = state.norm();
        if !pre_norm.is_finite() {
            return Err(Error::Numeric("weighted-sum state"));
        }
        if pre_norm < CANCELLATION_NORM {
            return Err(Error::DestructiveCancellation { norm: pre_norm });
        }
        Ok(WeightedSum {
            state: state.normalize()?,
            pre_norm,
        })
    }

    /// Write `index real imag` rows, one per amplitude.
    pub fn dump(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(out, "{i} {:.17e} {:.17e}", a.re, a.im).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}

impl Clone for StateVector {
    fn clone(&self) -> Self {
        census::touch(self.id);
        Self::from_parts(self.n_qubits, self.amps.clone())
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateVector")
            .field("id", &self.id)
            .field("n_qubits", &self.n_qubits)
            .field("amps", &self.amps)
            .finish()
    }
}

struct MuteGuard;

impl MuteGuard {
    fn new() -> Self {
        census::mute();
        MuteGuard
    }
}

impl Drop for MuteGuard {
    fn drop(&mut self) {
        census::unmute();
    }
}

fn ry_kernel(amps: &mut [Complex64], bit: usize, angle: f64) {
    let (s, c) = (angle / 2.0).sin_cos();
    for block in amps.chunks_exact_mut(bit << 1) {
        let (lo, hi) = block.split_at_mut(bit);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = x * c - y * s;
            *a1 = x * s + y * c;
        }
    }
}

fn cnot_kernel(amps: &mut [Complex64], cbit: usize, tbit: usize) {
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}
