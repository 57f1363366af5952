//! Quantities derived from the radar parameters: wavelength, per-gate
//! azimuth FM rate, FFT-ordered frequency axes and the range migration
//! table. Everything is evaluated on the raw-data grid, which is the
//! scene grid plus aperture and pulse margins.

use crate::error::{Error, Result};
use crate::params::{RadarParams, SPEED_OF_LIGHT};

#[derive(Debug, Clone)]
pub struct DerivedGeometry {
    pub params: RadarParams,
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    /// K_a(tau) = 2 V^2 / (lambda R_0(tau)), one entry per raw range gate.
    pub azimuth_fm_rate: Vec<f64>,
    /// Doppler frequency per FFT-ordered azimuth bin, Hz.
    pub doppler_axis: Vec<f64>,
    /// Range frequency per FFT-ordered range bin, Hz.
    pub range_freq_axis: Vec<f64>,
    /// Range migration in range-time seconds, row-major
    /// (doppler bin, raw range gate).
    pub migration: Vec<f64>,
    /// u_eta: pulses within the synthetic aperture.
    pub synthetic_aperture_samples: usize,
    /// u_tau: range samples covered by the pulse.
    pub pulse_samples: usize,
    /// Raw-data dimensions (rows, cols).
    pub raw_dims: (usize, usize),
}

impl DerivedGeometry {
    #[inline]
    pub fn migration_at(&self, doppler_bin: usize, gate: usize) -> f64 {
        self.migration[doppler_bin * self.raw_dims.1 + gate]
    }

    /// Zero-Doppler slant range of raw column `gate`.
    pub fn raw_gate_range(&self, gate: usize) -> f64 {
        self.params
            .gate_range(gate as isize - (self.pulse_samples / 2) as isize)
    }

    /// Row/column offset of the scene window inside the raw grid.
    pub fn scene_offset(&self) -> (usize, usize) {
        (self.synthetic_aperture_samples / 2, self.pulse_samples / 2)
    }
}

/// FFT-ordered frequency axis for `n` bins at sample rate `rate`,
/// spanning [-rate/2, rate/2).
pub fn fft_freq_axis(n: usize, rate: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let kk = if k < (n + 1) / 2 {
                k as f64
            } else {
                k as f64 - n as f64
            };
            kk * rate / n as f64
        })
        .collect()
}

pub fn derive_geometry(params: &RadarParams) -> Result<DerivedGeometry> {
    params.validate()?;
    let wavelength = SPEED_OF_LIGHT / params.carrier_freq;
    let pulse_samples = params.pulse_samples();
    let aperture = params.aperture_samples;
    let raw_dims = (params.n_azimuth + aperture, params.n_range + pulse_samples);
    let (n_az, n_rg) = raw_dims;

    let mut gate_ranges = Vec::with_capacity(n_rg);
    for p in 0..n_rg {
        let r0 = params.gate_range(p as isize - (pulse_samples / 2) as isize);
        if r0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "range gate {p} maps to non-positive slant range {r0}"
            )));
        }
        gate_ranges.push(r0);
    }

    let azimuth_fm_rate: Vec<f64> = gate_ranges
        .iter()
        .map(|&r0| 2.0 * params.velocity * params.velocity / (wavelength * r0))
        .collect();

    let doppler_axis = fft_freq_axis(n_az, params.prf);
    let range_freq_axis = fft_freq_axis(n_rg, params.range_sample_rate);

    // Delta_r(f_eta, tau) = [R_0 lambda^2 f_eta^2 / (8 V^2)] / (c/2), seconds
    let mut migration = vec![0.0; n_az * n_rg];
    let v2 = params.velocity * params.velocity;
    for (b, &f_eta) in doppler_axis.iter().enumerate() {
        let k = wavelength * wavelength * f_eta * f_eta / (8.0 * v2) / (SPEED_OF_LIGHT / 2.0);
        for (p, &r0) in gate_ranges.iter().enumerate() {
            migration[b * n_rg + p] = r0 * k;
        }
    }

    Ok(DerivedGeometry {
        params: params.clone(),
        wavelength,
        azimuth_fm_rate,
        doppler_axis,
        range_freq_axis,
        migration,
        synthetic_aperture_samples: aperture,
        pulse_samples,
        raw_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_from_carrier() {
        let g = derive_geometry(&RadarParams::simulation_preset()).unwrap();
        assert!((g.wavelength - 0.0599585).abs() < 1e-6);
    }

    #[test]
    fn azimuth_fm_rate_at_center() {
        // K_a = 2 V^2 / (lambda R_0) with V = 350, R_0 = 20 km, lambda = 0.06
        let mut p = RadarParams::simulation_preset();
        p.carrier_freq = SPEED_OF_LIGHT / 0.06;
        let g = derive_geometry(&p).unwrap();
        let center = g.pulse_samples / 2 + p.n_range / 2;
        assert!((g.azimuth_fm_rate[center] - 204.166_666_7).abs() < 1e-6);
    }

    #[test]
    fn zero_doppler_has_zero_migration() {
        let g = derive_geometry(&RadarParams::simulation_preset()).unwrap();
        for p in 0..g.raw_dims.1 {
            assert_eq!(g.migration_at(0, p), 0.0);
        }
    }

    #[test]
    fn migration_even_and_nondecreasing() {
        let g = derive_geometry(&RadarParams::simulation_preset()).unwrap();
        let n_az = g.raw_dims.0;
        let gate = g.raw_dims.1 / 2;
        for b in 1..n_az / 2 {
            assert_eq!(g.migration_at(b, gate), g.migration_at(n_az - b, gate));
        }
        let mut last = 0.0;
        for b in 0..=n_az / 2 {
            let m = g.migration_at(b, gate);
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn deterministic() {
        let p = RadarParams::simulation_preset();
        let a = derive_geometry(&p).unwrap();
        let b = derive_geometry(&p).unwrap();
        assert_eq!(a.migration, b.migration);
        assert_eq!(a.azimuth_fm_rate, b.azimuth_fm_rate);
    }

    #[test]
    fn pulse_sample_count_preset() {
        let g = derive_geometry(&RadarParams::simulation_preset()).unwrap();
        assert_eq!(g.pulse_samples, 150);
    }
}
