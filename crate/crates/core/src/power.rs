//! Downlink transmit power needed to deliver the allocated rates.
//!
//! Per-user power inverts the Shannon capacity over the allocated band and
//! scales by the average path loss. The expected total integrates that power
//! over a disk populated at a uniform density.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{self, ChannelEnv, ChannelError};
use crate::geometry::distance;
use crate::placement::{validate, Placement, UavConfig, User, Violation};
use crate::quadrature::AdaptiveSimpson;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("bandwidth must be positive and finite, got {0} Hz")]
    InvalidBandwidth(f64),
    #[error("rate must be non-negative and finite, got {0} bps")]
    InvalidRate(f64),
    #[error("invalid placement: {0}")]
    InvalidPlacement(#[from] Violation),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Transmit power in watts to deliver `rate_bps` over `band_hz` to a user at
/// horizontal distance `horizontal` from a UAV at `altitude`.
pub fn per_user_tx_power(
    altitude: f64,
    horizontal: f64,
    rate_bps: f64,
    band_hz: f64,
    noise_dbm_hz: f64,
    env: &ChannelEnv,
) -> Result<f64, PowerError> {
    if !(band_hz.is_finite() && band_hz > 0.0) {
        return Err(PowerError::InvalidBandwidth(band_hz));
    }
    if !(rate_bps.is_finite() && rate_bps >= 0.0) {
        return Err(PowerError::InvalidRate(rate_bps));
    }
    let loss_db = channel::avg_path_loss(altitude, horizontal, env)?;
    Ok(tx_power_at_loss(loss_db, rate_bps, band_hz, noise_dbm_hz))
}

fn tx_power_at_loss(loss_db: f64, rate_bps: f64, band_hz: f64, noise_dbm_hz: f64) -> f64 {
    let gain = 10f64.powf(loss_db / 10.0);
    // 2^(c/b) - 1 without cancellation at small spectral efficiency.
    let shannon = (rate_bps / band_hz * std::f64::consts::LN_2).exp_m1();
    gain * dbm_to_watts(noise_dbm_hz) * band_hz * shannon
}

/// Expected total transmit power over a disk of radius `radius` with users
/// at density `density` (users/m²), each receiving `rate_bps` over `band_hz`.
/// Noise density and channel come from `config`.
pub fn expected_tx_power(
    altitude: f64,
    radius: f64,
    density: f64,
    rate_bps: f64,
    band_hz: f64,
    config: &UavConfig,
) -> Result<f64, PowerError> {
    if density == 0.0 || radius == 0.0 {
        return Ok(0.0);
    }
    let (noise, env) = (config.noise_density_dbm_hz(), *config.env());
    // Validate once; the integrand below cannot fail for r >= 0.
    per_user_tx_power(altitude, 0.0, rate_bps, band_hz, noise, &env)?;
    let integrand = |r: f64| {
        let p = per_user_tx_power(altitude, r, rate_bps, band_hz, noise, &env).unwrap_or(f64::NAN);
        2.0 * std::f64::consts::PI * r * p
    };
    let integral = AdaptiveSimpson::default().integrate(integrand, 0.0, radius);
    Ok(density * integral.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    /// `(user index, watts)` for every served user.
    pub per_user: Vec<(usize, f64)>,
    pub total_served: f64,
    pub expected_total: f64,
    pub radius_used: f64,
    pub density: f64,
}

/// Per-user and expected power for one placement.
///
/// The expected total uses the mean allocated rate and bandwidth of the
/// served users; both are uniform under the built-in allocation policies.
pub fn placement_power_report(
    placement: &Placement,
    users: &[User],
    config: &UavConfig,
    density: f64,
) -> Result<PowerReport, PowerError> {
    validate(placement, users, config)?;
    let per_user = placement
        .served
        .iter()
        .map(|a| {
            let r = distance(&placement.center, &users[a.user].position);
            per_user_tx_power(config.altitude(), r, a.rate_bps, a.bandwidth_hz, config.noise_density_dbm_hz(), config.env())
                .map(|p| (a.user, p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let total_served = per_user.iter().map(|&(_, p)| p).sum();

    let expected_total = if placement.served.is_empty() {
        0.0
    } else {
        let n = placement.served.len() as f64;
        let rate = placement.served.iter().map(|a| a.rate_bps).sum::<f64>() / n;
        let band = placement.served.iter().map(|a| a.bandwidth_hz).sum::<f64>() / n;
        expected_tx_power(config.altitude(), placement.radius_m, density, rate, band, config)?
    };

    Ok(PowerReport { per_user, total_served, expected_total, radius_used: placement.radius_m, density })
}
