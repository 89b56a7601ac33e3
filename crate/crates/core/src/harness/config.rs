use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{Baseline, GradientSettings};
use crate::channel::{dbm_to_watts, LinkBudget, Point, RicianFactors, SPEED_OF_LIGHT};
use crate::engine::QMetaConfig;
use crate::error::{Error, Result};

/// Radio parameters. Defaults follow the reference system: 100 elements,
/// 64 AP antennas, 4 users, 28 GHz, 10 dBm per user, −90 dBm noise, λ/2
/// element pitch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub n_elements: usize,
    pub n_antennas: usize,
    pub n_users: usize,
    pub carrier_freq_hz: f64,
    /// Element pitch in wavelengths.
    pub element_spacing_wavelengths: f64,
    /// Coupling decay constant d₀ in units of the element pitch.
    pub coupling_decay_spacings: f64,
    pub tx_power_dbm: f64,
    pub noise_power_dbm: f64,
    /// Linear Rician K-factor for both hops.
    pub rician_k: f64,
    /// Antenna and element gains folded into each hop's path gain, in dB.
    pub link_gain_db: f64,
    /// CSI error variance relative to each link's path gain.
    pub csi_error: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            n_elements: 100,
            n_antennas: 64,
            n_users: 4,
            carrier_freq_hz: 28e9,
            element_spacing_wavelengths: 0.5,
            coupling_decay_spacings: 1.0,
            tx_power_dbm: 10.0,
            noise_power_dbm: -90.0,
            rician_k: 10.0,
            link_gain_db: 40.0,
            csi_error: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Users and fading are re-drawn every episode.
    PerEpisode,
    /// Users are drawn once per seed; only the fading changes per episode.
    PerSeed,
    /// One scenario per seed, repeated every episode.
    Static,
}

/// Service-area layout. The RIS and AP sit at corners of a rectangle
/// `[0, area_width] × [0, area_height]` (opposite corners by default); both
/// arrays face the area centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub area_width: f64,
    pub area_height: f64,
    pub ris_position: Point,
    pub ap_position: Point,
    /// Users closer than this to the RIS or AP are re-drawn.
    pub min_distance: f64,
    pub placement: Placement,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            area_width: 100.0,
            area_height: 100.0,
            ris_position: [0.0, 0.0],
            ap_position: [100.0, 100.0],
            min_distance: 1.0,
            placement: Placement::PerEpisode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    pub enabled: Vec<String>,
    pub gradient_steps: usize,
    pub gradient_lr: f64,
    pub ao_sweeps: usize,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        let g = GradientSettings::default();
        BaselineConfig {
            enabled: vec!["random".into(), "gradient".into(), "ao".into()],
            gradient_steps: g.steps,
            gradient_lr: g.lr,
            ao_sweeps: 2,
        }
    }
}

impl BaselineConfig {
    pub fn methods(&self) -> Result<Vec<Baseline>> {
        self.enabled
            .iter()
            .map(|name| {
                Baseline::parse(name).ok_or_else(|| {
                    Error::validation(
                        "baselines.enabled",
                        format!("unknown baseline `{name}` (expected random, gradient or ao)"),
                    )
                })
            })
            .collect()
    }

    pub fn gradient(&self) -> GradientSettings {
        GradientSettings {
            steps: self.gradient_steps,
            lr: self.gradient_lr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    /// Record measured wall-clock latency.
    Wall,
    /// Write zero latency so output files are reproducible byte for byte.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    CsiError,
    NElements,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csi_error" | "csi" => Ok(SweepAxis::CsiError),
            "n_elements" | "N" => Ok(SweepAxis::NElements),
            other => Err(Error::validation(
                "sweep",
                format!("unknown axis `{other}` (expected csi_error or n_elements)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// `axis=v1,v2,...`
    fn from_str(s: &str) -> Result<Self> {
        let (axis, values) = s
            .split_once('=')
            .ok_or_else(|| Error::validation("sweep", "expected `axis=v1,v2,...`"))?;
        let values = values
            .split(',')
            .filter(|v| !v.trim().is_empty())
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::validation("sweep", format!("`{v}` is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepSpec {
            axis: axis.parse()?,
            values,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub episodes: usize,
    pub seeds: usize,
    pub base_seed: u64,
    pub output: PathBuf,
    pub timing: Timing,
    /// Path registry checkpoint to start every seed from.
    pub warm_start: Option<PathBuf>,
    pub sweep: Option<SweepSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            episodes: 150,
            seeds: 10,
            base_seed: 0,
            output: PathBuf::from("results"),
            timing: Timing::Wall,
            warm_start: None,
            sweep: None,
        }
    }
}

/// Everything one benchmark run needs. Absent fields take the reference
/// defaults, including the 24-qubit optimizer layout (L=6, P=8, k=3).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub scenario: ScenarioConfig,
    pub qmetapath: QMetaConfig,
    pub baselines: BaselineConfig,
    pub run: RunConfig,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be positive, got {v}")))
    }
}

fn at_least_one(field: &str, v: usize) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(Error::validation(field, "must be at least 1"))
    }
}

impl ExperimentConfig {
    /// Small layout used by tests and quick runs: N=32, Q=8, K=2 with the
    /// 12-qubit optimizer (L=3, P=4, k=2).
    pub fn desk() -> Self {
        let mut cfg = ExperimentConfig::default();
        cfg.system.n_elements = 32;
        cfg.system.n_antennas = 8;
        cfg.system.n_users = 2;
        cfg.qmetapath = QMetaConfig::desk();
        cfg.run.episodes = 40;
        cfg.run.seeds = 5;
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.system;
        at_least_one("system.n_elements", s.n_elements)?;
        at_least_one("system.n_antennas", s.n_antennas)?;
        at_least_one("system.n_users", s.n_users)?;
        positive("system.carrier_freq_hz", s.carrier_freq_hz)?;
        positive("system.element_spacing_wavelengths", s.element_spacing_wavelengths)?;
        positive("system.coupling_decay_spacings", s.coupling_decay_spacings)?;
        for (field, dbm) in [
            ("system.tx_power_dbm", s.tx_power_dbm),
            ("system.noise_power_dbm", s.noise_power_dbm),
        ] {
            positive(field, dbm_to_watts(dbm))?;
        }
        if !(s.rician_k >= 0.0) {
            return Err(Error::validation("system.rician_k", "must be non-negative"));
        }
        if !s.link_gain_db.is_finite() {
            return Err(Error::validation("system.link_gain_db", "must be finite"));
        }
        if !(s.csi_error >= 0.0 && s.csi_error.is_finite()) {
            return Err(Error::validation("system.csi_error", "must be non-negative"));
        }

        let sc = &self.scenario;
        positive("scenario.area_width", sc.area_width)?;
        positive("scenario.area_height", sc.area_height)?;
        positive("scenario.min_distance", sc.min_distance)?;
        if sc.ris_position == sc.ap_position {
            return Err(Error::validation("scenario.ap_position", "coincides with the RIS"));
        }

        self.qmetapath.validate().map_err(|e| match e {
            Error::Parameter { name, reason } => {
                Error::validation(format!("qmetapath.{name}"), reason)
            }
            Error::Capacity {
                requested,
                capacity,
            } => Error::validation(
                "qmetapath.qubit_capacity",
                format!("layout needs {requested} qubits but the capacity is {capacity}"),
            ),
            other => other,
        })?;

        if !(4..=6).contains(&self.qmetapath.feature_qubits) {
            return Err(Error::validation(
                "qmetapath.feature_qubits",
                "scenarios provide between 4 and 6 features",
            ));
        }

        self.baselines.methods()?;
        at_least_one("baselines.gradient_steps", self.baselines.gradient_steps)?;
        positive("baselines.gradient_lr", self.baselines.gradient_lr)?;
        at_least_one("baselines.ao_sweeps", self.baselines.ao_sweeps)?;

        at_least_one("run.episodes", self.run.episodes)?;
        at_least_one("run.seeds", self.run.seeds)?;
        if let Some(sweep) = &self.run.sweep {
            validate_sweep(sweep)?;
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.system.carrier_freq_hz
    }

    pub fn element_spacing(&self) -> f64 {
        self.system.element_spacing_wavelengths * self.wavelength()
    }

    pub fn decay_const(&self) -> f64 {
        self.system.coupling_decay_spacings * self.element_spacing()
    }

    pub fn link_budget(&self) -> Result<LinkBudget> {
        LinkBudget::uniform(
            self.system.n_users,
            dbm_to_watts(self.system.tx_power_dbm),
            dbm_to_watts(self.system.noise_power_dbm),
        )
    }

    pub fn rician(&self) -> RicianFactors {
        RicianFactors {
            ue_ris: self.system.rician_k,
            ris_ap: self.system.rician_k,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::validation("config", e.to_string()))
    }
}

pub(crate) fn validate_sweep(sweep: &SweepSpec) -> Result<()> {
    if sweep.values.is_empty() {
        return Err(Error::validation("sweep", "needs at least one value"));
    }
    for &v in &sweep.values {
        match sweep.axis {
            SweepAxis::CsiError if !(v >= 0.0 && v.is_finite()) => {
                return Err(Error::validation("sweep", format!("csi_error {v} is negative")));
            }
            SweepAxis::NElements if !(v >= 1.0 && v.fract() == 0.0) => {
                return Err(Error::validation(
                    "sweep",
                    format!("n_elements {v} is not a positive integer"),
                ));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Parse and validate a TOML document. Missing fields take the defaults.
pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}
