//! Physical system parameters and the flat `key = value` config format.

use std::path::Path;

use crate::error::{Error, Result};

/// Exact CODATA speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Default number of pulses inside the synthetic aperture when a config
/// does not set `aperture_samples`.
pub const DEFAULT_APERTURE_SAMPLES: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct RadarParams {
    /// Slant range of scene center, meters (R_c).
    pub slant_range_center: f64,
    /// Effective radar velocity, m/s (V).
    pub velocity: f64,
    /// Beam squint angle, radians. Must be zero for this implementation.
    pub squint: f64,
    /// Carrier frequency, Hz (f_0).
    pub carrier_freq: f64,
    /// Pulse repetition frequency, Hz (F_a).
    pub prf: f64,
    /// Range FM rate, Hz/s (K_r).
    pub range_fm_rate: f64,
    /// Pulse duration, seconds (T_r).
    pub pulse_duration: f64,
    /// Range sampling rate, Hz (F_r).
    pub range_sample_rate: f64,
    /// Scene grid size in azimuth.
    pub n_azimuth: usize,
    /// Scene grid size in range.
    pub n_range: usize,
    /// Pulses within the synthetic aperture (u_eta); config key
    /// `aperture_samples`, optional.
    pub aperture_samples: usize,
}

impl RadarParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("slant_range_center", self.slant_range_center),
            ("velocity", self.velocity),
            ("carrier_freq", self.carrier_freq),
            ("prf", self.prf),
            ("range_fm_rate", self.range_fm_rate),
            ("pulse_duration", self.pulse_duration),
            ("range_sample_rate", self.range_sample_rate),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.squint != 0.0 {
            return Err(Error::InvalidParams(format!(
                "squint must be 0 (low-squint range-Doppler only), got {}",
                self.squint
            )));
        }
        if self.n_azimuth == 0 || self.n_range == 0 || self.aperture_samples == 0 {
            return Err(Error::InvalidParams("counts must be >= 1".into()));
        }
        if self.pulse_duration * self.range_sample_rate < 2.0 {
            return Err(Error::InvalidParams(
                "pulse_duration * range_sample_rate must be >= 2".into(),
            ));
        }
        Ok(())
    }

    /// Number of range samples covered by the transmitted pulse (u_tau).
    pub fn pulse_samples(&self) -> usize {
        (self.pulse_duration * self.range_sample_rate).round() as usize
    }

    /// Raw-data grid: scene grid plus aperture / pulse margins.
    pub fn raw_dims(&self) -> (usize, usize) {
        (
            self.n_azimuth + self.aperture_samples,
            self.n_range + self.pulse_samples(),
        )
    }

    /// Zero-Doppler slant range of scene range gate `j`, scene-center
    /// convention: gate n_range/2 sits at slant_range_center.
    pub fn gate_range(&self, j: isize) -> f64 {
        let half = self.n_range as isize / 2;
        self.slant_range_center
            + (j - half) as f64 * SPEED_OF_LIGHT / (2.0 * self.range_sample_rate)
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        let f = |key: &str| -> Result<f64> {
            map.get(key)
                .ok_or_else(|| Error::InvalidConfig(format!("missing key `{key}`")))?
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("key `{key}` is not a number")))
        };
        let n = |key: &str| -> Result<usize> {
            map.get(key)
                .ok_or_else(|| Error::InvalidConfig(format!("missing key `{key}`")))?
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("key `{key}` is not a count")))
        };
        let aperture_samples = match map.get("aperture_samples") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig("aperture_samples is not a count".into()))?,
            None => DEFAULT_APERTURE_SAMPLES,
        };
        let params = RadarParams {
            slant_range_center: f("slant_range_center")?,
            velocity: f("velocity")?,
            squint: f("squint")?,
            carrier_freq: f("carrier_freq")?,
            prf: f("prf")?,
            range_fm_rate: f("range_fm_rate")?,
            pulse_duration: f("pulse_duration")?,
            range_sample_rate: f("range_sample_rate")?,
            n_azimuth: n("n_azimuth")?,
            n_range: n("n_range")?,
            aperture_samples,
        };
        Ok(params)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_config_str(&text)
    }

    /// Airborne simulation preset (C-band, 180x180 scene).
    pub fn simulation_preset() -> Self {
        RadarParams {
            slant_range_center: 20e3,
            velocity: 350.0,
            squint: 0.0,
            carrier_freq: 5000e6,
            prf: 175.0,
            range_fm_rate: 37.5e12, // 37.5 MHz/us
            pulse_duration: 2e-6,
            range_sample_rate: 75e6,
            n_azimuth: 180,
            n_range: 180,
            aperture_samples: DEFAULT_APERTURE_SAMPLES,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulation_preset_is_valid() {
        let p = RadarParams::simulation_preset();
        p.validate().unwrap();
        assert_eq!(p.pulse_samples(), 150); // 2 us * 75 MHz
        assert_eq!(p.raw_dims(), (180 + 128, 180 + 150));
    }

    #[test]
    fn squint_rejected() {
        let mut p = RadarParams::simulation_preset();
        p.squint = 0.06;
        assert!(p.validate().is_err());
    }

    #[test]
    fn nonpositive_rejected() {
        let mut p = RadarParams::simulation_preset();
        p.prf = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = "\
slant_range_center = 20e3
velocity = 350
squint = 0
carrier_freq = 5000e6
prf = 175
range_fm_rate = 37.5e12
pulse_duration = 2e-6
range_sample_rate = 75e6
n_azimuth = 180
n_range = 180
aperture_samples = 128
";
        let p = RadarParams::from_config_str(text).unwrap();
        assert_eq!(p, RadarParams::simulation_preset());
    }

    #[test]
    fn missing_key_rejected() {
        assert!(RadarParams::from_config_str("velocity = 1").is_err());
    }
}
