use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::geometry::{NetworkGeometry, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Half-wavelength ULA steering vector: entry m is `exp(jπ·m·sin θ)`.
pub fn steering_vector(n_points: usize, angle: f64) -> Vec<Complex64> {
    let k = PI * angle.sin();
    (0..n_points)
        .map(|m| Complex64::from_polar(1.0, k * m as f64))
        .collect()
}

/// Free-space power gain `(λ / 4πd)²`.
pub fn pathloss(distance: f64, carrier_freq: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / carrier_freq;
    (lambda / (4.0 * PI * distance)).powi(2)
}

/// Mutual coupling between RIS elements, `C[m][n] = exp(−d_mn / d₀)`.
///
/// On a uniform linear layout the matrix is `r^|m−n|` with
/// `r = exp(−d_N/d₀)`. When that structure is known, products with `C` run
/// as two first-order recursions in O(N) instead of a dense O(N²) pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub decay_ratio: Option<f64>,
}

impl Coupling {
    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Coupling {
            matrix,
            decay_ratio: Some(0.0),
        }
    }

    /// Arbitrary dense coupling, no structure assumed.
    pub fn dense(matrix: Vec<Vec<f64>>) -> Self {
        Coupling {
            matrix,
            decay_ratio: None,
        }
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    /// `C · v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self.decay_ratio {
            Some(r) => toeplitz_decay_apply(r, v),
            None => self
                .matrix
                .iter()
                .map(|row| row.iter().zip(v).map(|(c, x)| x * c).sum())
                .collect(),
        }
    }
}

// w_n = Σ_m r^|n−m| v_m via a forward and a backward sweep.
fn toeplitz_decay_apply(r: f64, v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut fwd = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc = v[i] + acc * r;
        fwd[i] = acc;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in (0..n).rev() {
        acc = v[i] + acc * r;
        fwd[i] += acc - v[i];
    }
    fwd
}

pub fn coupling_matrix(geometry: &NetworkGeometry) -> Result<Coupling> {
    if !(geometry.decay_const > 0.0 && geometry.decay_const.is_finite()) {
        return Err(Error::param(
            "decay_const",
            format!("must be positive, got {}", geometry.decay_const),
        ));
    }
    if !(geometry.element_spacing > 0.0 && geometry.element_spacing.is_finite()) {
        return Err(Error::param(
            "element_spacing",
            format!("must be positive, got {}", geometry.element_spacing),
        ));
    }
    let n = geometry.n_elements;
    let matrix = (0..n)
        .map(|m| {
            (0..n)
                .map(|k| {
                    let d = m.abs_diff(k) as f64 * geometry.element_spacing;
                    (-d / geometry.decay_const).exp()
                })
                .collect()
        })
        .collect();
    Ok(Coupling {
        matrix,
        decay_ratio: Some((-geometry.element_spacing / geometry.decay_const).exp()),
    })
}

/// Linear Rician K-factors for the two hops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicianFactors {
    pub ue_ris: f64,
    pub ris_ap: f64,
}

/// Linear large-scale power gains: one per user for the first hop, one for
/// the RIS→AP hop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathGains {
    pub ue_ris: Vec<f64>,
    pub ris_ap: f64,
}

impl PathGains {
    /// Free-space gains from the geometry, scaled by `extra_gain` (linear).
    pub fn free_space(geometry: &NetworkGeometry, extra_gain: f64) -> Self {
        let f = geometry.carrier_freq;
        PathGains {
            ue_ris: (0..geometry.n_users)
                .map(|k| extra_gain * pathloss(geometry.ue_ris_distance(k), f))
                .collect(),
            ris_ap: extra_gain * pathloss(geometry.ris_ap_distance(), f),
        }
    }
}

/// All channel state for one scenario.
///
/// `h_ue_ris[k]` is user k's N-length vector, `h_ris_ap` is N×Q (row n is
/// element n). Complex entries serialize as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    pub h_ue_ris: Vec<Vec<Complex64>>,
    pub h_ris_ap: Vec<Vec<Complex64>>,
    pub coupling: Coupling,
    pub kappa: RicianFactors,
    pub gains: PathGains,
    pub aoa_ue: Vec<f64>,
    pub aod_ris: f64,
    pub aoa_ap: f64,
}

impl ChannelSet {
    pub fn n_elements(&self) -> usize {
        self.coupling.len()
    }

    pub fn n_antennas(&self) -> usize {
        self.h_ris_ap.first().map_or(0, Vec::len)
    }

    pub fn n_users(&self) -> usize {
        self.h_ue_ris.len()
    }

    pub fn check_dims(&self) -> Result<()> {
        let n = self.n_elements();
        let q = self.n_antennas();
        if self.h_ris_ap.len() != n {
            return Err(Error::Shape {
                expected: n,
                actual: self.h_ris_ap.len(),
            });
        }
        if let Some(row) = self.h_ris_ap.iter().find(|r| r.len() != q) {
            return Err(Error::Shape {
                expected: q,
                actual: row.len(),
            });
        }
        if let Some(h) = self.h_ue_ris.iter().find(|h| h.len() != n) {
            return Err(Error::Shape {
                expected: n,
                actual: h.len(),
            });
        }
        if let Some(row) = self.coupling.matrix.iter().find(|r| r.len() != n) {
            return Err(Error::Shape {
                expected: n,
                actual: row.len(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let chs: ChannelSet = serde_json::from_str(text)?;
        chs.check_dims()?;
        Ok(chs)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Standard circularly-symmetric complex Gaussian, unit variance.
pub(crate) fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draw Rician channels for every user and the RIS→AP hop.
///
/// `h = √β (√(κ/(1+κ))·LoS + √(1/(1+κ))·NLoS)` with iid CN(0, 1) scattering.
/// The RIS→AP LoS term is the rank-one outer product of the AP arrival
/// steering vector and the conjugated RIS departure steering vector, stored
/// element-major. Users are drawn independently of each other.
pub fn generate_channels(
    geometry: &NetworkGeometry,
    kappa: RicianFactors,
    gains: &PathGains,
    seed: u64,
) -> Result<ChannelSet> {
    geometry.validate()?;
    if !(kappa.ue_ris >= 0.0 && kappa.ris_ap >= 0.0) {
        return Err(Error::param("kappa", "Rician K-factors must be non-negative"));
    }
    if gains.ue_ris.len() != geometry.n_users {
        return Err(Error::Shape {
            expected: geometry.n_users,
            actual: gains.ue_ris.len(),
        });
    }
    if gains.ue_ris.iter().chain([&gains.ris_ap]).any(|&b| !(b > 0.0)) {
        return Err(Error::param("gains", "path gains must be positive"));
    }

    let n = geometry.n_elements;
    let q = geometry.n_antennas;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let split = |kappa: f64| {
        if kappa.is_infinite() {
            (1.0, 0.0)
        } else {
            ((kappa / (1.0 + kappa)).sqrt(), (1.0 / (1.0 + kappa)).sqrt())
        }
    };

    let aoa_ue: Vec<f64> = (0..geometry.n_users).map(|k| geometry.aoa_ue(k)).collect();
    let (los_w, nlos_w) = split(kappa.ue_ris);
    let h_ue_ris = aoa_ue
        .iter()
        .zip(&gains.ue_ris)
        .map(|(&theta, &beta)| {
            let amp = beta.sqrt();
            steering_vector(n, theta)
                .into_iter()
                .map(|los| amp * (los * los_w + complex_gaussian(&mut rng) * nlos_w))
                .collect()
        })
        .collect();

    let aod_ris = geometry.aod_ris();
    let aoa_ap = geometry.aoa_ap();
    let a_ris = steering_vector(n, aod_ris);
    let a_ap = steering_vector(q, aoa_ap);
    let (los_w, nlos_w) = split(kappa.ris_ap);
    let amp = gains.ris_ap.sqrt();
    let h_ris_ap = a_ris
        .iter()
        .map(|an| {
            a_ap.iter()
                .map(|aq| amp * (aq * an.conj() * los_w + complex_gaussian(&mut rng) * nlos_w))
                .collect()
        })
        .collect();

    Ok(ChannelSet {
        h_ue_ris,
        h_ris_ap,
        coupling: coupling_matrix(geometry)?,
        kappa,
        gains: gains.clone(),
        aoa_ue,
        aod_ris,
        aoa_ap,
    })
}

/// Imperfect CSI: add iid complex Gaussian error to every channel entry.
///
/// The error variance is `variance` relative to the link's large-scale gain,
/// i.e. entries of user k's vector get CN(0, σ²·β_k) and the RIS→AP matrix
/// gets CN(0, σ²·β_AP). With unit gains this is plain CN(0, σ²).
pub fn inject_csi_error(chs: &ChannelSet, variance: f64, seed: u64) -> Result<ChannelSet> {
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(Error::param("variance", format!("must be non-negative, got {variance}")));
    }
    let mut out = chs.clone();
    if variance == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (h, beta) in out.h_ue_ris.iter_mut().zip(&chs.gains.ue_ris) {
        let sd = (variance * beta).sqrt();
        h.iter_mut().for_each(|x| *x += complex_gaussian(&mut rng) * sd);
    }
    let sd = (variance * chs.gains.ris_ap).sqrt();
    for row in &mut out.h_ris_ap {
        row.iter_mut().for_each(|x| *x += complex_gaussian(&mut rng) * sd);
    }
    Ok(out)
}
