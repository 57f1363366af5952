//! Small deterministic fixtures shared by unit, integration and
//! acceptance tests. Not part of the public API surface proper.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::ComplexImage;
use crate::params::RadarParams;

/// Desk-scale radar parameters for algebraic tests: scene `n_az x n_rg`,
/// `u_eta` aperture pulses and a pulse spanning `u_tau` range samples.
/// The chirp occupies the full sampled band and the carrier frequency is
/// chosen so the Doppler chirp sweeps 85% of the PRF across the aperture
/// (matching the full-size preset), so both axes actually compress.
pub fn tiny_params(n_az: usize, n_rg: usize, u_eta: usize, u_tau: usize) -> RadarParams {
    let pulse_duration = 1e-6 * u_tau as f64;
    let range_sample_rate = 1e6;
    let slant_range_center = 10.0e3;
    let velocity = 100.0;
    let prf = 100.0;
    // azimuth bandwidth K_a * T_a = 0.85 * prf fixes the wavelength via
    // K_a = 2 V^2 / (lambda R_c), T_a = u_eta / prf
    let wavelength =
        2.0 * velocity * velocity * u_eta as f64 / (slant_range_center * prf * prf * 0.85);
    RadarParams {
        slant_range_center,
        velocity,
        squint: 0.0,
        carrier_freq: crate::params::SPEED_OF_LIGHT / wavelength,
        prf,
        range_fm_rate: range_sample_rate / pulse_duration,
        pulse_duration,
        range_sample_rate,
        n_azimuth: n_az,
        n_range: n_rg,
        aperture_samples: u_eta,
    }
}

pub fn random_scene_image(rows: usize, cols: usize, seed: u64) -> ComplexImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexImage::from_data(rows, cols, data).unwrap()
}

/// `k` unit-amplitude targets with uniform random phases at distinct
/// random positions.
pub fn random_sparse_image(rows: usize, cols: usize, k: usize, seed: u64) -> ComplexImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img = ComplexImage::zeros(rows, cols);
    let mut used = std::collections::HashSet::new();
    while used.len() < k {
        let r = rng.gen_range(0..rows);
        let c = rng.gen_range(0..cols);
        if used.insert((r, c)) {
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            img.set(r, c, Complex64::from_polar(1.0, phase));
        }
    }
    img
}
