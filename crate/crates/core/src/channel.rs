//! Air-to-ground channel model.
//!
//! The probability of a line-of-sight link follows an S-curve in the
//! elevation angle between the UAV and the ground user. The average loss is
//! the LoS/NLoS mixture of free-space loss plus a mean excess loss for each
//! branch. [`max_radius`] inverts the average loss for a given altitude and
//! loss budget to obtain the largest usable coverage radius.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default upper end of the radius bracket searched by [`max_radius`].
pub const DEFAULT_RADIUS_BRACKET_M: f64 = 1.0e6;

/// Width of the final bisection interval in [`max_radius`].
const RADIUS_TOLERANCE_M: f64 = 1.0e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("altitude must be positive and finite, got {0} m")]
    InvalidAltitude(f64),
    #[error("horizontal distance must be non-negative and finite, got {0} m")]
    InvalidDistance(f64),
    #[error("slant distance is zero")]
    ZeroDistance,
    #[error("invalid channel environment: {0}")]
    InvalidEnv(&'static str),
    #[error("loss budget {budget_db} dB is below the nadir loss {nadir_db} dB")]
    BudgetUnreachableAtNadir { budget_db: f64, nadir_db: f64 },
    #[error("loss budget {budget_db} dB not reached within {upper_m} m")]
    NoBracket { budget_db: f64, upper_m: f64 },
}

/// Environment constants of the air-to-ground model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelEnv {
    /// S-curve offset parameter.
    pub a: f64,
    /// S-curve steepness parameter (per degree).
    pub b: f64,
    /// Mean excess loss of the LoS branch (dB).
    pub eta_los: f64,
    /// Mean excess loss of the NLoS branch (dB).
    pub eta_nlos: f64,
    /// Carrier frequency (Hz).
    pub carrier_hz: f64,
}

impl ChannelEnv {
    /// Suburban environment at a 2 GHz carrier.
    pub const SUBURBAN: ChannelEnv = ChannelEnv {
        a: 4.88,
        b: 0.43,
        eta_los: 0.1,
        eta_nlos: 21.0,
        carrier_hz: 2.0e9,
    };

    pub fn validate(&self) -> Result<(), ChannelError> {
        let finite = [self.a, self.b, self.eta_los, self.eta_nlos, self.carrier_hz]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(ChannelError::InvalidEnv("non-finite parameter"));
        }
        if self.a <= 0.0 || self.b <= 0.0 {
            return Err(ChannelError::InvalidEnv("a and b must be positive"));
        }
        if self.carrier_hz <= 0.0 {
            return Err(ChannelError::InvalidEnv("carrier frequency must be positive"));
        }
        if !(self.eta_los >= 0.0 && self.eta_nlos >= self.eta_los) {
            return Err(ChannelError::InvalidEnv("require eta_nlos >= eta_los >= 0"));
        }
        Ok(())
    }
}

impl Default for ChannelEnv {
    fn default() -> Self {
        Self::SUBURBAN
    }
}

/// Relative position of a ground user with respect to the UAV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry3D {
    altitude: f64,
    horizontal: f64,
}

impl Geometry3D {
    pub fn new(altitude: f64, horizontal: f64) -> Result<Self, ChannelError> {
        if !(altitude.is_finite() && altitude > 0.0) {
            return Err(ChannelError::InvalidAltitude(altitude));
        }
        if !(horizontal.is_finite() && horizontal >= 0.0) {
            return Err(ChannelError::InvalidDistance(horizontal));
        }
        Ok(Self { altitude, horizontal })
    }

    pub fn altitude(&self) -> f64 {
        self.altitude
    }

    pub fn horizontal(&self) -> f64 {
        self.horizontal
    }

    /// Straight-line UAV to user distance.
    pub fn slant_distance(&self) -> f64 {
        self.horizontal.hypot(self.altitude)
    }

    /// Elevation angle in radians; exactly pi/2 directly below the UAV.
    pub fn elevation(&self) -> f64 {
        self.altitude.atan2(self.horizontal)
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation().to_degrees()
    }
}

fn los_probability(geom: &Geometry3D, env: &ChannelEnv) -> f64 {
    let theta_deg = geom.elevation_deg();
    1.0 / (1.0 + env.a * (-env.b * (theta_deg - env.a)).exp())
}

fn free_space_db(distance: f64, carrier_hz: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * carrier_hz * distance / SPEED_OF_LIGHT).log10()
}

/// Probability of a line-of-sight link.
pub fn p_los(altitude: f64, horizontal: f64, env: &ChannelEnv) -> Result<f64, ChannelError> {
    let geom = Geometry3D::new(altitude, horizontal)?;
    Ok(los_probability(&geom, env))
}

/// Probability of a non-line-of-sight link, `1 - p_los`.
pub fn p_nlos(altitude: f64, horizontal: f64, env: &ChannelEnv) -> Result<f64, ChannelError> {
    Ok(1.0 - p_los(altitude, horizontal, env)?)
}

/// Free-space path loss in dB over the slant distance.
pub fn fspl(altitude: f64, horizontal: f64, carrier_hz: f64) -> Result<f64, ChannelError> {
    if !(altitude.is_finite() && horizontal.is_finite()) {
        return Err(ChannelError::InvalidDistance(horizontal));
    }
    let distance = horizontal.hypot(altitude);
    if distance == 0.0 {
        return Err(ChannelError::ZeroDistance);
    }
    Ok(free_space_db(distance, carrier_hz))
}

/// Average path loss in dB, weighting the LoS and NLoS branches by their
/// probabilities.
pub fn avg_path_loss(altitude: f64, horizontal: f64, env: &ChannelEnv) -> Result<f64, ChannelError> {
    let geom = Geometry3D::new(altitude, horizontal)?;
    Ok(mixture_loss(&geom, env))
}

fn mixture_loss(geom: &Geometry3D, env: &ChannelEnv) -> f64 {
    let p = los_probability(geom, env);
    let free = free_space_db(geom.slant_distance(), env.carrier_hz);
    p * (free + env.eta_los) + (1.0 - p) * (free + env.eta_nlos)
}

/// Largest horizontal radius whose average path loss stays within
/// `budget_db` at the given altitude.
pub fn max_radius(altitude: f64, budget_db: f64, env: &ChannelEnv) -> Result<f64, ChannelError> {
    max_radius_within(altitude, budget_db, env, DEFAULT_RADIUS_BRACKET_M)
}

/// [`max_radius`] with an explicit upper end for the search bracket.
///
/// The average loss is strictly increasing in the horizontal distance, so
/// bisection on `[0, upper_m]` converges to the unique crossing. The lower
/// end of the final interval is returned, which keeps the loss at the
/// returned radius within the budget.
pub fn max_radius_within(
    altitude: f64,
    budget_db: f64,
    env: &ChannelEnv,
    upper_m: f64,
) -> Result<f64, ChannelError> {
    let loss_at = |r: f64| avg_path_loss(altitude, r, env);
    let nadir_db = loss_at(0.0)?;
    if budget_db.is_nan() || budget_db < nadir_db {
        return Err(ChannelError::BudgetUnreachableAtNadir { budget_db, nadir_db });
    }
    if loss_at(upper_m)? < budget_db {
        return Err(ChannelError::NoBracket { budget_db, upper_m });
    }
    let (mut lo, mut hi) = (0.0_f64, upper_m);
    while hi - lo > RADIUS_TOLERANCE_M {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if loss_at(mid)? <= budget_db {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
