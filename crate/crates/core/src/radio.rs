//! Antenna patterns and link budgets.
//!
//! Access links are mmWave and use a realistic directional pattern; backhaul
//! links are terahertz and use the ITU-R F.699 narrow-beam pattern plus a
//! spreading-times-absorption path loss. All internal arithmetic is in linear
//! units; decibels only appear at the API boundary.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Converts a noise density in dBm/MHz to W/Hz.
pub fn dbm_per_mhz_to_watts_per_hz(dbm_per_mhz: f64) -> f64 {
    db_to_linear(dbm_per_mhz) * 1e-3 / 1e6
}

pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

fn check_angle(name: &'static str, deg: f64) -> Result<()> {
    if (0.0..=180.0).contains(&deg) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: deg,
            domain: "[0, 180] degrees",
        })
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "distance",
            value: d,
            domain: "(0, inf) meters",
        })
    }
}

/// Directional mmWave antenna, described by its half-power beamwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmWaveAntennaConfig {
    pub theta_3db: f64,
}

impl Default for MmWaveAntennaConfig {
    fn default() -> Self {
        Self { theta_3db: 30.0 }
    }
}

impl MmWaveAntennaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_3db > 0.0 && self.theta_3db < 180.0 / 2.6 {
            Ok(())
        } else {
            Err(Error::config(
                "mmwave_theta_3db",
                format!("must lie in (0, {:.4}) degrees, got {}", 180.0 / 2.6, self.theta_3db),
            ))
        }
    }

    /// Main-lobe width, 2.6 times the half-power beamwidth.
    pub fn main_lobe_width(&self) -> f64 {
        2.6 * self.theta_3db
    }

    /// Boresight gain in dBi.
    pub fn max_gain_db(&self) -> f64 {
        let half = (self.theta_3db / 2.0).to_radians();
        linear_to_db((1.6162 / half.sin()).powi(2))
    }

    /// Side-lobe gain in dBi.
    pub fn side_lobe_gain_db(&self) -> f64 {
        -0.4111 * self.theta_3db.ln() - 10.579
    }
}

/// Gain of the mmWave pattern at off-axis angle `theta` (degrees).
pub fn mmwave_gain_db(theta: f64, cfg: &MmWaveAntennaConfig) -> Result<f64> {
    check_angle("theta", theta)?;
    if theta <= cfg.main_lobe_width() / 2.0 {
        Ok(cfg.max_gain_db() - 3.01 * (2.0 * theta / cfg.theta_3db).powi(2))
    } else {
        Ok(cfg.side_lobe_gain_db())
    }
}

/// ITU-R F.699 narrow-beam antenna (Cassegrain dish on the backhaul).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThzAntennaConfig {
    pub g_max: f64,
    pub d_over_lambda: f64,
}

impl Default for ThzAntennaConfig {
    fn default() -> Self {
        Self {
            g_max: 47.0,
            d_over_lambda: 152.0,
        }
    }
}

impl ThzAntennaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.g_max > 0.0 && self.g_max.is_finite()) {
            return Err(Error::config("thz_gmax", format!("must be > 0, got {}", self.g_max)));
        }
        if !(self.d_over_lambda > 0.0 && self.d_over_lambda.is_finite()) {
            return Err(Error::config(
                "thz_d_over_lambda",
                format!("must be > 0, got {}", self.d_over_lambda),
            ));
        }
        if self.first_side_lobe_db() >= self.g_max {
            return Err(Error::config(
                "thz_gmax",
                format!(
                    "must exceed the first side-lobe gain {:.3} dBi implied by D/lambda",
                    self.first_side_lobe_db()
                ),
            ));
        }
        Ok(())
    }

    /// First side-lobe gain G1 in dBi.
    pub fn first_side_lobe_db(&self) -> f64 {
        2.0 + 15.0 * self.d_over_lambda.log10()
    }

    /// End of the main lobe, degrees.
    pub fn phi_m(&self) -> f64 {
        20.0 / self.d_over_lambda * (self.g_max - self.first_side_lobe_db()).sqrt()
    }

    /// Start of the far side-lobe region, degrees.
    pub fn phi_r(&self) -> f64 {
        15.85 * self.d_over_lambda.powf(-0.6)
    }
}

/// Gain of the terahertz pattern at off-axis angle `phi` (degrees).
pub fn thz_gain_db(phi: f64, cfg: &ThzAntennaConfig) -> Result<f64> {
    check_angle("phi", phi)?;
    let gain = if phi < cfg.phi_m() {
        cfg.g_max - 2.5e-3 * (cfg.d_over_lambda * phi).powi(2)
    } else if phi < cfg.phi_r() {
        cfg.first_side_lobe_db()
    } else if phi < 48.0 {
        32.0 - 25.0 * phi.log10()
    } else {
        -10.0
    };
    Ok(gain)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadioConfig {
    /// Access transmit power, W.
    pub pt_access: f64,
    /// Backhaul transmit power, W.
    pub pt_backhaul: f64,
    /// Access bandwidth, Hz.
    pub bw_access: f64,
    /// Backhaul bandwidth, Hz.
    pub bw_backhaul: f64,
    /// Access carrier, Hz.
    pub f_access: f64,
    /// Backhaul carrier, Hz.
    pub f_backhaul: f64,
    /// Noise power spectral density, W/Hz.
    pub noise_psd: f64,
    /// Access path-loss exponent.
    pub alpha: f64,
    /// Transceiver efficiency in (0, 1].
    pub eta: f64,
    /// Molecular absorption coefficient at the backhaul carrier, 1/m.
    pub k_abs: f64,
    pub mmwave_ant: MmWaveAntennaConfig,
    pub thz_ant: ThzAntennaConfig,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            pt_access: 1.0,
            pt_backhaul: 1.0,
            bw_access: 2e9,
            bw_backhaul: 20e9,
            f_access: 63e9,
            f_backhaul: 310e9,
            noise_psd: dbm_per_mhz_to_watts_per_hz(-134.0),
            alpha: 2.0,
            eta: 0.9,
            k_abs: 0.0033,
            mmwave_ant: MmWaveAntennaConfig::default(),
            thz_ant: ThzAntennaConfig::default(),
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("pt_access", self.pt_access),
            ("pt_backhaul", self.pt_backhaul),
            ("bw_access", self.bw_access),
            ("bw_backhaul", self.bw_backhaul),
            ("f_access", self.f_access),
            ("f_backhaul", self.f_backhaul),
            ("noise_psd", self.noise_psd),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(field, format!("must be > 0, got {v}")));
            }
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::config("eta", format!("must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::config("alpha", format!("must be >= 0, got {}", self.alpha)));
        }
        if !(self.k_abs >= 0.0 && self.k_abs.is_finite()) {
            return Err(Error::config("k_abs", format!("must be >= 0, got {}", self.k_abs)));
        }
        self.mmwave_ant.validate()?;
        self.thz_ant.validate()
    }

    /// Free-space constant (lambda_A / 4 pi)^2 of the access link.
    pub fn access_beta(&self) -> f64 {
        (wavelength(self.f_access) / (4.0 * PI)).powi(2)
    }
}

/// Received access power in W for a link of length `d` with the given
/// transmitter and receiver off-axis angles.
pub fn access_received_power(d: f64, cfg: &RadioConfig, theta_tx: f64, theta_rx: f64) -> Result<f64> {
    check_distance(d)?;
    let g_tx = db_to_linear(mmwave_gain_db(theta_tx, &cfg.mmwave_ant)?);
    let g_rx = db_to_linear(mmwave_gain_db(theta_rx, &cfg.mmwave_ant)?);
    Ok(cfg.access_beta() * cfg.pt_access * g_tx * g_rx * d.powf(-cfg.alpha))
}

/// Boresight access SNR (linear).
pub fn access_snr(d: f64, cfg: &RadioConfig) -> Result<f64> {
    Ok(access_received_power(d, cfg, 0.0, 0.0)? / (cfg.noise_psd * cfg.bw_access))
}

/// Shannon rate of a boresight-aligned access link, bit/s.
pub fn access_rate(d: f64, cfg: &RadioConfig) -> Result<f64> {
    let snr = access_snr(d, cfg)?;
    Ok(cfg.eta * cfg.bw_access * (1.0 + snr).log2())
}

/// Terahertz path gain: spreading loss times molecular absorption loss.
pub fn thz_path_loss(d: f64, cfg: &RadioConfig) -> Result<f64> {
    check_distance(d)?;
    let spreading = (SPEED_OF_LIGHT / (4.0 * PI * cfg.f_backhaul * d)).powi(2);
    Ok(spreading * (-cfg.k_abs * d).exp())
}

/// Shannon rate of a boresight-aligned MBS-to-SBS backhaul link, bit/s.
pub fn backhaul_rate(d: f64, cfg: &RadioConfig) -> Result<f64> {
    let rho = thz_path_loss(d, cfg)?;
    let g = db_to_linear(thz_gain_db(0.0, &cfg.thz_ant)?);
    let snr = cfg.pt_backhaul * g * g * rho / (cfg.noise_psd * cfg.bw_backhaul);
    Ok(cfg.eta * cfg.bw_backhaul * (1.0 + snr).log2())
}
