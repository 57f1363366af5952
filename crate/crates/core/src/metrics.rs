//! Point-target quality metrics: FFT-upsampled chip extraction, peak
//! sidelobe ratio, impulse response width and support-recovery counts.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::image::ComplexImage;
use crate::scene::PointScene;

/// Extract a `chip_size` square centered at `center`, zero-pad its 2-D
/// spectrum symmetrically by `factor` and inverse transform. Amplitudes
/// interpolate the chip, so output energy is `factor^2` times the input.
pub fn upsample_chip(
    image: &ComplexImage,
    center: (usize, usize),
    chip_size: usize,
    factor: usize,
) -> Result<ComplexImage> {
    if factor == 0 || !factor.is_power_of_two() {
        return Err(Error::InvalidParams(format!(
            "upsampling factor must be a power of two, got {factor}"
        )));
    }
    let half = chip_size / 2;
    if center.0 < half
        || center.1 < half
        || center.0 - half + chip_size > image.rows()
        || center.1 - half + chip_size > image.cols()
    {
        return Err(Error::InvalidParams(format!(
            "chip of size {chip_size} at ({}, {}) exceeds the {}x{} image",
            center.0,
            center.1,
            image.rows(),
            image.cols()
        )));
    }
    let chip = image.crop(center.0 - half, center.1 - half, chip_size, chip_size);
    if factor == 1 {
        return Ok(chip);
    }

    let n = chip_size;
    let m = n * factor;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(m);

    // forward 2-D transform of the chip (unscaled)
    let mut spec = chip.clone();
    for r in 0..n {
        fwd.process(spec.row_mut(r));
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = spec.at(r, c);
        }
        fwd.process(&mut col);
        for r in 0..n {
            spec.set(r, c, col[r]);
        }
    }

    // embed the centered spectrum into the larger grid; frequencies at
    // or above +N/2 land on the negative side so Parseval holds exactly
    let target = |k: usize| -> usize {
        if k < (n + 1) / 2 {
            k
        } else {
            m - (n - k)
        }
    };
    let mut padded = ComplexImage::zeros(m, m);
    for kr in 0..n {
        for kc in 0..n {
            padded.set(target(kr), target(kc), spec.at(kr, kc));
        }
    }

    // inverse 2-D transform; 1/m per axis plus `factor` per axis keeps
    // the interpolated amplitudes equal to the chip samples
    let scale = factor as f64 * factor as f64 / (m as f64 * m as f64);
    for r in 0..m {
        inv.process(padded.row_mut(r));
    }
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for c in 0..m {
        for r in 0..m {
            col[r] = padded.at(r, c);
        }
        inv.process(&mut col);
        for r in 0..m {
            padded.set(r, c, col[r] * scale);
        }
    }
    Ok(padded)
}

/// Peak sidelobe ratio of a 1-D magnitude profile, in dB. The main lobe
/// is delimited by the first local minima flanking the global peak;
/// returns `f64::NEG_INFINITY` when no sidelobe exists.
pub fn pslr(profile: &[f64]) -> f64 {
    let n = profile.len();
    if n < 3 {
        return f64::NEG_INFINITY;
    }
    let peak_idx = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let peak = profile[peak_idx];
    if peak <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut left = peak_idx;
    while left > 0 && profile[left - 1] < profile[left] {
        left -= 1;
    }
    let mut right = peak_idx;
    while right + 1 < n && profile[right + 1] < profile[right] {
        right += 1;
    }
    let mut best: Option<f64> = None;
    for i in 1..n - 1 {
        if i >= left && i <= right {
            continue;
        }
        if profile[i] >= profile[i - 1] && profile[i] >= profile[i + 1] && profile[i] > 0.0 {
            best = Some(best.map_or(profile[i], |b: f64| b.max(profile[i])));
        }
    }
    match best {
        Some(side) => 20.0 * (side / peak).log10(),
        None => f64::NEG_INFINITY,
    }
}

/// Impulse response width: linear-interpolated main-lobe width 3 dB
/// below the peak, in the profile's own sample units.
pub fn irw(profile: &[f64]) -> f64 {
    let n = profile.len();
    if n == 0 {
        return 0.0;
    }
    let peak_idx = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let peak = profile[peak_idx];
    if peak <= 0.0 {
        return 0.0;
    }
    if profile.iter().filter(|&&v| v > 0.0).count() == 1 {
        return 0.0;
    }
    let threshold = peak * 10f64.powf(-3.0 / 20.0);
    let cross = |a: f64, b: f64| -> f64 {
        // fraction of the way from a to b where the threshold is crossed
        if (a - b).abs() < f64::EPSILON {
            0.0
        } else {
            (a - threshold) / (a - b)
        }
    };
    let left_x = {
        let mut i = peak_idx;
        loop {
            if i == 0 {
                break 0.0;
            }
            if profile[i - 1] < threshold {
                break i as f64 - cross(profile[i], profile[i - 1]);
            }
            i -= 1;
        }
    };
    let right_x = {
        let mut i = peak_idx;
        loop {
            if i + 1 >= n {
                break (n - 1) as f64;
            }
            if profile[i + 1] < threshold {
                break i as f64 + cross(profile[i], profile[i + 1]);
            }
            i += 1;
        }
    };
    right_x - left_x
}

/// Row and column magnitude cuts through the peak of `img`.
pub fn peak_cuts(img: &ComplexImage) -> (Vec<f64>, Vec<f64>) {
    let (pr, pc, _) = img.peak();
    let row_cut: Vec<f64> = (0..img.cols()).map(|c| img.at(pr, c).norm()).collect();
    let col_cut: Vec<f64> = (0..img.rows()).map(|r| img.at(r, pc).norm()).collect();
    (row_cut, col_cut)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportMetrics {
    pub detections: usize,
    pub misses: usize,
    pub false_alarms: usize,
    pub max_position_error: f64,
}

/// Match recovered local maxima above `threshold_db` (relative to the
/// recovered peak) against truth targets; a target counts as detected
/// when a qualifying local max lies within one sample of it.
pub fn support_metrics(
    truth: &PointScene,
    recovered: &ComplexImage,
    threshold_db: f64,
) -> Result<SupportMetrics> {
    if threshold_db >= 0.0 {
        return Err(Error::InvalidParams(
            "threshold_db must be negative relative to the peak".into(),
        ));
    }
    let (_, _, peak) = recovered.peak();
    if peak == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let threshold = peak * 10f64.powf(threshold_db / 20.0);
    let rows = recovered.rows();
    let cols = recovered.cols();
    let mut maxima = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = recovered.at(r, c).norm();
            if v < threshold {
                continue;
            }
            let mut is_max = true;
            'neigh: for dr in -1i32..=1 {
                for dc in -1i32..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let rr = r as i32 + dr;
                    let cc = c as i32 + dc;
                    if rr < 0 || cc < 0 || rr >= rows as i32 || cc >= cols as i32 {
                        continue;
                    }
                    if recovered.at(rr as usize, cc as usize).norm() > v {
                        is_max = false;
                        break 'neigh;
                    }
                }
            }
            if is_max {
                maxima.push((r, c));
            }
        }
    }

    // a target is detected when some qualifying max lies within one
    // sample; a max is a false alarm when no target lies within one
    // sample (the two matchings are scored independently)
    let near = |(r, c): (usize, usize), t: &crate::scene::PointTarget| -> Option<f64> {
        let dr = r as f64 - t.azimuth_index as f64;
        let dc = c as f64 - t.range_index as f64;
        (dr.abs() <= 1.0 && dc.abs() <= 1.0).then(|| (dr * dr + dc * dc).sqrt())
    };
    let mut detections = 0;
    let mut max_err = 0.0f64;
    for t in &truth.targets {
        let best = maxima.iter().filter_map(|&m| near(m, t)).fold(None, {
            |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d)))
        });
        if let Some(d) = best {
            detections += 1;
            max_err = max_err.max(d);
        }
    }
    let false_alarms = maxima
        .iter()
        .filter(|&&m| truth.targets.iter().all(|t| near(m, t).is_none()))
        .count();
    Ok(SupportMetrics {
        detections,
        misses: truth.targets.len() - detections,
        false_alarms,
        max_position_error: max_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::PointTarget;

    #[test]
    fn upsample_factor_one_is_identity() {
        let img = crate::testing::random_scene_image(16, 16, 80);
        let chip = upsample_chip(&img, (8, 8), 8, 1).unwrap();
        assert_eq!(chip.data(), img.crop(4, 4, 8, 8).data());
    }

    #[test]
    fn upsample_interpolates_on_grid_exponential() {
        // chip holding exp(j 2 pi (2 r / 8 + 3 c / 8)); band-limited
        // interpolation must reproduce the same exponential
        let n = 8;
        let factor = 4;
        let mut img = ComplexImage::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let phase = std::f64::consts::TAU * (2.0 * r as f64 + 3.0 * c as f64) / n as f64;
                img.set(r, c, Complex64::from_polar(1.0, phase));
            }
        }
        let up = upsample_chip(&img, (n / 2, n / 2), n, factor).unwrap();
        let m = n * factor;
        for r in 0..m {
            for c in 0..m {
                let phase = std::f64::consts::TAU
                    * (2.0 * r as f64 + 3.0 * c as f64)
                    / m as f64;
                let expect = Complex64::from_polar(1.0, phase);
                assert!(
                    (up.at(r, c) - expect).norm() < 1e-9,
                    "mismatch at ({r}, {c})"
                );
            }
        }
    }

    #[test]
    fn upsample_energy_ratio() {
        let img = crate::testing::random_scene_image(32, 32, 81);
        let chip = img.crop(8, 8, 16, 16);
        let up = upsample_chip(&img, (16, 16), 16, 4).unwrap();
        let ratio = up.norm().powi(2) / chip.norm().powi(2);
        assert!((ratio - 16.0).abs() < 1e-10, "energy ratio {ratio}");
    }

    #[test]
    fn chip_out_of_bounds_rejected() {
        let img = ComplexImage::zeros(16, 16);
        assert!(upsample_chip(&img, (2, 8), 16, 2).is_err());
    }

    #[test]
    fn sinc_squared_profile_pslr() {
        // |sinc|^2 intensity pattern has its first sidelobe 13.26 dB
        // below the peak when measured on magnitudes of |sinc|
        let n = 4096;
        let profile: Vec<f64> = (0..n)
            .map(|i| {
                let x = (i as f64 - n as f64 / 2.0) / 64.0;
                if x == 0.0 {
                    1.0
                } else {
                    (std::f64::consts::PI * x).sin().abs() / (std::f64::consts::PI * x).abs()
                }
            })
            .collect();
        let v = pslr(&profile);
        assert!((v - (-13.26)).abs() < 0.05, "pslr {v}");
        let w = irw(&profile);
        assert!((w / 64.0 - 0.886).abs() < 0.01, "irw {w}");
    }

    #[test]
    fn degenerate_profiles() {
        let mut profile = vec![0.0; 32];
        profile[10] = 1.0;
        assert_eq!(pslr(&profile), f64::NEG_INFINITY);
        assert_eq!(irw(&profile), 0.0);
    }

    #[test]
    fn pslr_and_irw_scale_invariant() {
        let profile: Vec<f64> = (0..256)
            .map(|i| {
                let x = (i as f64 - 128.0) / 16.0;
                if x == 0.0 {
                    1.0
                } else {
                    ((std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)).abs()
                }
            })
            .collect();
        let scaled: Vec<f64> = profile.iter().map(|v| v * 7.25).collect();
        assert!((pslr(&profile) - pslr(&scaled)).abs() < 1e-12);
        assert!((irw(&profile) - irw(&scaled)).abs() < 1e-12);
    }

    #[test]
    fn support_metrics_exact_and_shifted() {
        let truth = PointScene::new(vec![
            PointTarget {
                azimuth_index: 5,
                range_index: 5,
                reflectivity: Complex64::new(1.0, 0.0),
            },
            PointTarget {
                azimuth_index: 10,
                range_index: 12,
                reflectivity: Complex64::new(1.0, 0.0),
            },
        ])
        .unwrap();
        let mut exact = ComplexImage::zeros(20, 20);
        for t in &truth.targets {
            exact.set(t.azimuth_index, t.range_index, Complex64::new(1.0, 0.0));
        }
        let m = support_metrics(&truth, &exact, -30.0).unwrap();
        assert_eq!((m.detections, m.misses, m.false_alarms), (2, 0, 0));
        assert_eq!(m.max_position_error, 0.0);

        let mut shifted = ComplexImage::zeros(20, 20);
        for t in &truth.targets {
            shifted.set(t.azimuth_index + 3, t.range_index, Complex64::new(1.0, 0.0));
        }
        let m = support_metrics(&truth, &shifted, -30.0).unwrap();
        assert_eq!((m.detections, m.misses, m.false_alarms), (0, 2, 2));
    }

    #[test]
    fn support_metrics_guards() {
        let truth = PointScene::default();
        assert!(support_metrics(&truth, &ComplexImage::zeros(4, 4), -30.0).is_err());
        let mut img = ComplexImage::zeros(4, 4);
        img.set(1, 1, Complex64::new(1.0, 0.0));
        assert!(support_metrics(&truth, &img, 3.0).is_err());
    }
}
