use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, Placement};
use crate::channel::{
    bearing, distance, generate_channels, pathloss, user_gains, ChannelSet, LinkBudget,
    NetworkGeometry, PathGains, PhaseVector, Point,
};
use crate::engine::{normalize_features, FeatureBounds, RawScenario, ScenarioFeatures};
use crate::error::{Error, Result};

const STREAM_PLACEMENT: u64 = 0;
const STREAM_FADING: u64 = 1;
pub(crate) const STREAM_CSI: u64 = 2;
pub(crate) const STREAM_BASELINE: u64 = 3;

/// Upper end of the rate feature, in bps/Hz per user.
const RATE_CAP_PER_USER: f64 = 4.0;

/// Independent 64-bit seed for one (seed, episode, purpose) triple.
pub fn derive_seed(seed: u64, episode: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode.wrapping_mul(16).wrapping_add(stream));
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: NetworkGeometry,
    pub features: ScenarioFeatures,
    pub channels: ChannelSet,
    pub budget: LinkBudget,
}

fn area_center(cfg: &ExperimentConfig) -> Point {
    [cfg.scenario.area_width / 2.0, cfg.scenario.area_height / 2.0]
}

/// Geometry for explicit user positions, arrays facing the area centre.
pub fn network_geometry(cfg: &ExperimentConfig, ue_positions: Vec<Point>) -> Result<NetworkGeometry> {
    if ue_positions.len() != cfg.system.n_users {
        return Err(Error::Shape {
            expected: cfg.system.n_users,
            actual: ue_positions.len(),
        });
    }
    let center = area_center(cfg);
    let sc = &cfg.scenario;
    let geometry = NetworkGeometry {
        n_elements: cfg.system.n_elements,
        n_antennas: cfg.system.n_antennas,
        n_users: cfg.system.n_users,
        carrier_freq: cfg.system.carrier_freq_hz,
        element_spacing: cfg.element_spacing(),
        ue_positions,
        ris_position: sc.ris_position,
        ap_position: sc.ap_position,
        decay_const: cfg.decay_const(),
        ris_broadside: bearing(sc.ris_position, center),
        ap_broadside: bearing(sc.ap_position, center),
    };
    geometry.validate()?;
    Ok(geometry)
}

fn draw_positions(cfg: &ExperimentConfig, seed: u64) -> Vec<Point> {
    let sc = &cfg.scenario;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cfg.system.n_users)
        .map(|_| loop {
            let p = [rng.gen_range(0.0..=sc.area_width), rng.gen_range(0.0..=sc.area_height)];
            if distance(p, sc.ris_position) >= sc.min_distance
                && distance(p, sc.ap_position) >= sc.min_distance
            {
                break p;
            }
        })
        .collect()
}

fn gain_db(cfg: &ExperimentConfig, d: f64) -> f64 {
    10.0 * pathloss(d, cfg.system.carrier_freq_hz).log10() + cfg.system.link_gain_db
}

/// Measured scenario features for a drawn geometry and its (estimated)
/// channels, normalized to [0, 1].
///
/// * location: user centroid x and y over the area, then the mean sine of
///   the users' arrival angles at the RIS over [−1, 1] (as many of these as
///   the layout has location wires);
/// * interference: mean share of interference in each user's received power
///   with all phases at zero;
/// * path loss: mean user→RIS gain in dB between the farthest point of the
///   area and the minimum user distance;
/// * rate: sum rate with all phases at zero over `4·K` bps/Hz.
pub fn scenario_features(
    cfg: &ExperimentConfig,
    geometry: &NetworkGeometry,
    channels: &ChannelSet,
    budget: &LinkBudget,
) -> Result<ScenarioFeatures> {
    let k = geometry.n_users;
    let sc = &cfg.scenario;
    let n_loc = cfg.qmetapath.feature_qubits.saturating_sub(3);
    if n_loc > 3 {
        return Err(Error::validation(
            "qmetapath.feature_qubits",
            "scenarios provide at most 3 location features",
        ));
    }

    let cx = geometry.ue_positions.iter().map(|p| p[0]).sum::<f64>() / k as f64;
    let cy = geometry.ue_positions.iter().map(|p| p[1]).sum::<f64>() / k as f64;
    let sin_aoa = (0..k).map(|i| geometry.aoa_ue(i).sin()).sum::<f64>() / k as f64;
    let loc_all = [
        (cx, (0.0, sc.area_width)),
        (cy, (0.0, sc.area_height)),
        (sin_aoa, (-1.0, 1.0)),
    ];

    let zero = PhaseVector::zeros(geometry.n_elements);
    let gains = user_gains(channels, &zero)?;
    let received: Vec<f64> = gains.iter().zip(&budget.tx_power).map(|(g, p)| g * p).collect();
    let total: f64 = received.iter().sum();
    let interference = if total > 0.0 && k > 1 {
        received.iter().map(|r| (total - r) / total).sum::<f64>() / k as f64
    } else {
        0.0
    };
    let rate = crate::channel::se_from_gains(&gains, budget);

    let pathloss_db = (0..k)
        .map(|i| gain_db(cfg, geometry.ue_ris_distance(i).max(sc.min_distance)))
        .sum::<f64>()
        / k as f64;
    let far = [
        [0.0, 0.0],
        [sc.area_width, 0.0],
        [0.0, sc.area_height],
        [sc.area_width, sc.area_height],
    ]
    .iter()
    .map(|&c| distance(c, sc.ris_position))
    .fold(sc.min_distance, f64::max);

    let raw = RawScenario {
        loc: loc_all[..n_loc].iter().map(|(v, _)| *v).collect(),
        interference,
        pathloss: pathloss_db,
        rate,
    };
    let bounds = FeatureBounds {
        loc: loc_all[..n_loc].iter().map(|(_, b)| *b).collect(),
        interference: (0.0, 1.0),
        pathloss: (gain_db(cfg, far), gain_db(cfg, sc.min_distance)),
        rate: (0.0, RATE_CAP_PER_USER * k as f64),
    };
    normalize_features(&raw, &bounds)
}

/// One seeded scenario: user drop, Rician channels, features and budget.
///
/// Placement and fading use separate random streams derived from
/// `(seed, episode)`; with [`Placement::PerSeed`] the drop ignores the
/// episode, with [`Placement::Static`] both do.
pub fn generate_scenario(cfg: &ExperimentConfig, episode: usize, seed: u64) -> Result<Scenario> {
    let ep = episode as u64;
    let (drop_ep, fade_ep) = match cfg.scenario.placement {
        Placement::PerEpisode => (ep, ep),
        Placement::PerSeed => (0, ep),
        Placement::Static => (0, 0),
    };
    let positions = draw_positions(cfg, derive_seed(seed, drop_ep, STREAM_PLACEMENT));
    let geometry = network_geometry(cfg, positions)?;
    let extra = 10f64.powf(cfg.system.link_gain_db / 10.0);
    let gains = PathGains::free_space(&geometry, extra);
    let channels = generate_channels(
        &geometry,
        cfg.rician(),
        &gains,
        derive_seed(seed, fade_ep, STREAM_FADING),
    )?;
    let budget = cfg.link_budget()?;
    let features = scenario_features(cfg, &geometry, &channels, &budget)?;
    Ok(Scenario {
        geometry,
        features,
        channels,
        budget,
    })
}
