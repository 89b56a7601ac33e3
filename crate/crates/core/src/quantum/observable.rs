/// Diagonal observables in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// Pauli Z on one qubit; expectation lies in [−1, 1].
    PauliZ(usize),
    /// Arbitrary real diagonal with one entry per basis state.
    Diagonal(Vec<f64>),
}

impl Observable {
    /// α·O₁ + β·O₂ for two diagonals of equal length.
    pub fn combine(alpha: f64, a: &[f64], beta: f64, b: &[f64]) -> Option<Observable> {
        (a.len() == b.len()).then(|| {
            Observable::Diagonal(a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect())
        })
    }
}
