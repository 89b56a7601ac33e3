use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type Point = [f64; 2];

/// Node placement and array dimensions for one RIS-assisted uplink.
///
/// The RIS is a uniform linear array of `n_elements` with pitch
/// `element_spacing`; `ris_broadside` and `ap_broadside` are the bearings
/// (radians, from the +x axis) of the two arrays' normals. Arrival and
/// departure angles are measured from those normals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGeometry {
    pub n_elements: usize,
    pub n_antennas: usize,
    pub n_users: usize,
    pub carrier_freq: f64,
    pub element_spacing: f64,
    pub ue_positions: Vec<Point>,
    pub ris_position: Point,
    pub ap_position: Point,
    pub decay_const: f64,
    pub ris_broadside: f64,
    pub ap_broadside: f64,
}

impl NetworkGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_elements", self.n_elements),
            ("n_antennas", self.n_antennas),
            ("n_users", self.n_users),
        ] {
            if v == 0 {
                return Err(Error::param(name, "must be at least 1"));
            }
        }
        for (name, v) in [
            ("element_spacing", self.element_spacing),
            ("decay_const", self.decay_const),
            ("carrier_freq", self.carrier_freq),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if self.ue_positions.len() != self.n_users {
            return Err(Error::Shape {
                expected: self.n_users,
                actual: self.ue_positions.len(),
            });
        }
        let mut nodes = vec![self.ris_position, self.ap_position];
        nodes.extend_from_slice(&self.ue_positions);
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if distance(nodes[i], nodes[j]) <= 0.0 {
                    return Err(Error::param("positions", "two nodes coincide"));
                }
            }
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    pub fn ue_ris_distance(&self, k: usize) -> f64 {
        distance(self.ue_positions[k], self.ris_position)
    }

    pub fn ris_ap_distance(&self) -> f64 {
        distance(self.ris_position, self.ap_position)
    }

    /// Angle of arrival at the RIS from user `k`.
    pub fn aoa_ue(&self, k: usize) -> f64 {
        relative_angle(bearing(self.ris_position, self.ue_positions[k]), self.ris_broadside)
    }

    /// Angle of departure from the RIS toward the AP.
    pub fn aod_ris(&self) -> f64 {
        relative_angle(bearing(self.ris_position, self.ap_position), self.ris_broadside)
    }

    /// Angle of arrival at the AP from the RIS.
    pub fn aoa_ap(&self) -> f64 {
        relative_angle(bearing(self.ap_position, self.ris_position), self.ap_broadside)
    }
}

pub fn distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Bearing of `to` as seen from `from`, radians from the +x axis.
pub fn bearing(from: Point, to: Point) -> f64 {
    (to[1] - from[1]).atan2(to[0] - from[0])
}

fn relative_angle(bearing: f64, broadside: f64) -> f64 {
    let d = (bearing - broadside).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}
